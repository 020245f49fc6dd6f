//! Rank-3 alcove picture: the seven admissible alcoves drawn in the sum-zero
//! plane, the chosen stratum subset shaded dark and labeled with its
//! recomputed central-function values, the rotation labeling the base
//! alcove, and the three orbit vertices marked. All coordinates are exact
//! integers, so the emitted SVG is byte-identical across runs.

use alcove_core::admissible::{adm_set, critical_indices, levi_adm, LeviDatum};
use alcove_core::hecke::Algebra;
use alcove_core::weyl::{tau_gl, ExtAffElem, WeylCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillClass {
    Admissible,
    Dark,
}

#[derive(Clone, Debug)]
pub struct AlcovePolygon {
    pub vertices: [(i64, i64); 3],
    pub fill: FillClass,
    /// Central-function value for dark alcoves, element shorthand otherwise.
    pub label: String,
    pub is_base: bool,
}

#[derive(Clone, Debug)]
pub struct AlcovePicture {
    pub polygons: Vec<AlcovePolygon>,
    pub orbit_vertices: Vec<(i64, i64)>,
}

// Projection of the sum-zero plane: X = K1·(v₁ − v₂), Y = K2·(v₁ + v₂ − 2v₃).
// Both forms kill (1,1,1); K2/K1 ≈ 1/√3 makes the alcoves near-equilateral
// while keeping every coordinate an integer.
const K1: i64 = 212;
const K2: i64 = 122;

fn project(v: &[i64]) -> (i64, i64) {
    (K1 * (v[0] - v[1]), K2 * (v[0] + v[1] - 2 * v[2]))
}

fn alcove_triangle(w: &ExtAffElem) -> [(i64, i64); 3] {
    let corners = [[0i64, 0, 0], [-1, 0, 0], [-1, -1, 0]];
    let mut out = [(0i64, 0i64); 3];
    for (i, c) in corners.iter().enumerate() {
        out[i] = project(&w.act_point(c));
    }
    out
}

fn barycenter(tri: &[(i64, i64); 3]) -> (i64, i64) {
    (
        (tri[0].0 + tri[1].0 + tri[2].0) / 3,
        (tri[0].1 + tri[1].1 + tri[2].1) / 3,
    )
}

fn elem_shorthand(w: &ExtAffElem) -> String {
    let lam: String = w.lambda().iter().map(|x| x.to_string()).collect();
    let line: String = w
        .perm()
        .one_line_1indexed()
        .iter()
        .map(|x| x.to_string())
        .collect();
    format!("{lam}|{line}")
}

pub fn rank3_picture(levi: &LeviDatum, nu: &[i64]) -> Result<AlcovePicture, String> {
    if levi.d != 3 {
        return Err(format!("the alcove picture is rank 3 only, got d={}", levi.d));
    }
    let ctx = WeylCtx::gl(3);
    let tau = tau_gl(3);
    let dark: Vec<ExtAffElem> = levi_adm(levi, nu).map_err(|e| e.to_string())?;
    let malg = Algebra::new(levi.ctx(), 1);
    let k = malg.k_mu(nu).map_err(|e| e.to_string())?;

    let mut adm = adm_set(&ctx);
    adm.sort_by_key(|w| ctx.sort_key(w));
    let mut polygons = Vec::new();
    for w in &adm {
        critical_indices(&ctx, w).map_err(|e| e.to_string())?;
        let is_dark = dark.contains(w);
        polygons.push(AlcovePolygon {
            vertices: alcove_triangle(w),
            fill: if is_dark {
                FillClass::Dark
            } else {
                FillClass::Admissible
            },
            label: if is_dark {
                k.coeff(w).to_string()
            } else {
                elem_shorthand(w)
            },
            is_base: *w == tau,
        });
    }
    assert_eq!(polygons.len(), 7, "rank 3 has seven admissible alcoves");

    // The finite orbit of μ₀: e₁, e₂, e₃, one vertex of each extremal alcove.
    let orbit_vertices = (0..3)
        .map(|i| {
            let mut v = [0i64; 3];
            v[i] = 1;
            project(&v)
        })
        .collect();

    Ok(AlcovePicture {
        polygons,
        orbit_vertices,
    })
}

pub fn render_svg(pic: &AlcovePicture) -> String {
    let mut min_x = i64::MAX;
    let mut min_y = i64::MAX;
    let mut max_x = i64::MIN;
    let mut max_y = i64::MIN;
    for poly in &pic.polygons {
        for &(x, y) in &poly.vertices {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
    }
    let margin = 60;
    let (x0, y0) = (min_x - margin, min_y - margin);
    let (w, h) = (max_x - min_x + 2 * margin, max_y - min_y + 2 * margin);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {y0} {w} {h}\">\n"
    ));
    out.push_str(
        "<style>\n\
         .adm { fill: #cccccc; stroke: #444444; stroke-width: 3; }\n\
         .dark { fill: #777777; stroke: #222222; stroke-width: 3; }\n\
         .klabel { font: 36px monospace; fill: #000000; text-anchor: middle; }\n\
         .wlabel { font: 24px monospace; fill: #333333; text-anchor: middle; }\n\
         .tlabel { font: italic 40px serif; fill: #000000; text-anchor: middle; }\n\
         .orbit { fill: #000000; }\n\
         </style>\n",
    );
    for poly in &pic.polygons {
        let pts: Vec<String> = poly
            .vertices
            .iter()
            .map(|(x, y)| format!("{x},{y}"))
            .collect();
        let class = match poly.fill {
            FillClass::Admissible => "adm",
            FillClass::Dark => "dark",
        };
        out.push_str(&format!(
            "<polygon class=\"{}\" points=\"{}\"/>\n",
            class,
            pts.join(" ")
        ));
    }
    // Labels after all fills so they are never painted over.
    for poly in &pic.polygons {
        let (bx, by) = barycenter(&poly.vertices);
        let class = match poly.fill {
            FillClass::Admissible => "wlabel",
            FillClass::Dark => "klabel",
        };
        out.push_str(&format!(
            "<text class=\"{}\" x=\"{}\" y=\"{}\">{}</text>\n",
            class,
            bx,
            by,
            xml_escape(&poly.label)
        ));
        if poly.is_base {
            out.push_str(&format!(
                "<text class=\"tlabel\" x=\"{}\" y=\"{}\">&#964;</text>\n",
                bx,
                by + 44
            ));
        }
    }
    for &(x, y) in &pic.orbit_vertices {
        out.push_str(&format!("<circle class=\"orbit\" cx=\"{x}\" cy=\"{y}\" r=\"9\"/>\n"));
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
