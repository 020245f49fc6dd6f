//! Library surface of the command-line front end: record types with JSON,
//! CSV, and DOT emitters plus validating parsers, the rank-3 SVG alcove
//! picture, verification suites, and the argument micro-parsers. The binary
//! in main.rs is a thin dispatcher over these so that tests and fuzz targets
//! can drive every parsing and rendering path directly.

pub mod figure;
pub mod records;
pub mod suites;
