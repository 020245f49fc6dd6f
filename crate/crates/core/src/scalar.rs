//! Exact coefficient arithmetic: Laurent polynomials in `v` over the
//! cyclotomic field ℚ(ζ_m) = ℚ[z]/Φ_m(z).
//!
//! `v` is a formal square root of the Hecke parameter `q`; scalars whose
//! v-exponents are all even print and specialize in `q` directly. The
//! context parameter `m` is fixed per computation (m = p−1 when a depth-zero
//! character is in play, m = 1 otherwise). No floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Dense ℚ[x] helpers (index = degree, no trailing zeros, empty = 0).

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    poly_trim(&mut out);
    out
}

/// (quotient, remainder) of a by b, b ≠ 0.
fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quo = vec![Rat::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        quo[k] = c.clone();
        for (i, bi) in b.iter().enumerate() {
            let v = &rem[k + i] - bi * &c;
            rem[k + i] = v;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_trim(&mut quo);
    (quo, rem)
}

/// Inverse of a modulo f (f irreducible over ℚ, a ≢ 0): extended Euclid.
fn poly_inv_mod(a: &[Rat], f: &[Rat]) -> Vec<Rat> {
    // Invariants: r0 = s0·a (mod f), r1 = s1·a (mod f).
    let (mut r0, mut r1) = (f.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    assert_eq!(r0.len(), 1, "gcd with an irreducible modulus must be a unit");
    let c = r0[0].recip();
    let mut inv = poly_mul(&s0, &[c]);
    let (_, inv) = {
        poly_trim(&mut inv);
        poly_divmod(&inv, f)
    };
    inv
}

/// Φ_m as a dense ℚ[x] polynomial, via x^m − 1 = Π_{e | m} Φ_e.
fn cyclotomic_poly(m: u32) -> Arc<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Rat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    assert!(m >= 1);
    let mut num = vec![Rat::zero(); m as usize + 1];
    num[0] = -Rat::one();
    num[m as usize] = Rat::one();
    let mut phi = num;
    for e in 1..m {
        if m % e == 0 {
            let phi_e = cyclotomic_poly(e);
            let (q, r) = poly_divmod(&phi, &phi_e);
            assert!(r.is_empty(), "cyclotomic division must be exact");
            phi = q;
        }
    }
    let arc = Arc::new(phi);
    cache.lock().unwrap().insert(m, arc.clone());
    arc
}

/// Degree of Φ_m (Euler's totient).
pub fn cyclotomic_degree(m: u32) -> usize {
    cyclotomic_poly(m).len() - 1
}

// ---------------------------------------------------------------------------
// Elements of ℚ[z]/Φ_m(z).

/// A residue mod Φ_m, stored dense with degree < deg Φ_m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cyc {
    m: u32,
    c: Vec<Rat>, // no trailing zeros
}

impl Cyc {
    pub fn zero(m: u32) -> Self {
        Cyc { m, c: Vec::new() }
    }

    pub fn from_rat(m: u32, r: Rat) -> Self {
        let mut c = vec![r];
        poly_trim(&mut c);
        Cyc { m, c }
    }

    /// ζ_m^k, reduced mod Φ_m.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let k = k.rem_euclid(m as i64) as usize;
        let mut mono = vec![Rat::zero(); k + 1];
        mono[k] = Rat::one();
        Cyc::reduce(m, mono)
    }

    fn reduce(m: u32, p: Vec<Rat>) -> Self {
        let (_, r) = poly_divmod(&p, &cyclotomic_poly(m));
        Cyc { m, c: r }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self.c.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    fn promote(&self, m: u32) -> Result<Cyc> {
        if self.m == m {
            Ok(self.clone())
        } else if self.is_rational() {
            Ok(Cyc { m, c: self.c.clone() })
        } else {
            Err(Error::ContextMismatch(self.m, m))
        }
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        let (a, b) = unify(self, o);
        let mut c = vec![Rat::zero(); a.c.len().max(b.c.len())];
        for (i, x) in a.c.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in b.c.iter().enumerate() {
            c[i] += x;
        }
        poly_trim(&mut c);
        Cyc { m: a.m, c }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            m: self.m,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let (a, b) = unify(self, o);
        Cyc::reduce(a.m, poly_mul(&a.c, &b.c))
    }

    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        if self.c.len() == 1 {
            return Ok(Cyc {
                m: self.m,
                c: vec![self.c[0].recip()],
            });
        }
        Ok(Cyc {
            m: self.m,
            c: poly_inv_mod(&self.c, &cyclotomic_poly(self.m)),
        })
    }

    /// Canonical display: rational as `a/b`, otherwise a parenthesized
    /// polynomial in z.
    fn render(&self) -> String {
        if let Some(r) = self.as_rat() {
            return render_rat(&r);
        }
        let mut s = String::from("(");
        let mut first = true;
        for (k, coef) in self.c.iter().enumerate().rev() {
            if coef.is_zero() {
                continue;
            }
            let mag = coef.abs();
            if first {
                if coef.is_negative() {
                    s.push('-');
                }
                first = false;
            } else if coef.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&render_var_term(&mag, "z", k as i64));
        }
        s.push(')');
        s
    }
}

fn unify(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
    if a.m == b.m {
        (a.clone(), b.clone())
    } else if a.is_rational() {
        (a.promote(b.m).unwrap(), b.clone())
    } else if b.is_rational() {
        (a.clone(), b.promote(a.m).unwrap())
    } else {
        panic!("scalar context mismatch: m={} vs m={}", a.m, b.m);
    }
}

fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `mag*var^e` with the conventional omissions (mag is non-negative).
fn render_var_term(mag: &Rat, var: &str, e: i64) -> String {
    let coef = render_rat(mag);
    match (coef.as_str(), e) {
        (_, 0) => coef,
        ("1", 1) => var.to_string(),
        ("1", _) => format!("{var}^{e}"),
        (_, 1) => format!("{coef}*{var}"),
        (_, _) => format!("{coef}*{var}^{e}"),
    }
}

// ---------------------------------------------------------------------------
// Scalars: Laurent polynomials in v over ℚ(ζ_m).

/// An element of ℚ(ζ_m)[v, v⁻¹].
///
/// Arithmetic auto-promotes when one operand is rational-valued (ℚ embeds in
/// every ℚ(ζ_m)); combining two genuinely cyclotomic scalars of different m
/// is a programming error and panics. Equality is structural (same m).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    m: u32,
    terms: BTreeMap<i64, Cyc>, // v-exponent → coefficient, no zero entries
}

impl Scalar {
    pub fn zero(m: u32) -> Self {
        Scalar {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: u32) -> Self {
        Scalar::from_rat(m, Rat::one())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn from_rat(m: u32, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, Cyc::from_rat(m, r));
        }
        Scalar { m, terms }
    }

    pub fn from_int(m: u32, n: i64) -> Self {
        Scalar::from_rat(m, rat_int(n))
    }

    pub fn from_cyc(c: Cyc) -> Self {
        let m = c.m;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Scalar { m, terms }
    }

    /// ζ_m^k as a scalar.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        Scalar::from_cyc(Cyc::zeta_pow(m, k))
    }

    /// c·v^e.
    pub fn v_pow(m: u32, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(e, Cyc::from_rat(m, Rat::one()));
        Scalar { m, terms }
    }

    /// q^e = v^{2e}.
    pub fn q_pow(m: u32, e: i64) -> Self {
        Scalar::v_pow(m, 2 * e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Cyc)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, e: i64, c: Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    fn unified_m(&self, o: &Scalar) -> u32 {
        if self.m == o.m {
            self.m
        } else if self.is_rational_valued() {
            o.m
        } else if o.is_rational_valued() {
            self.m
        } else {
            panic!("scalar context mismatch: m={} vs m={}", self.m, o.m);
        }
    }

    /// True when every coefficient lies in ℚ (context-independent value).
    pub fn is_rational_valued(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    /// The underlying rational when the scalar is a v-free rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if *e == 0 {
                    c.as_rat()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Re-root the scalar in context m (requires rational values unless equal).
    pub fn promote(&self, m: u32) -> Result<Scalar> {
        if self.m == m {
            return Ok(self.clone());
        }
        let mut out = Scalar::zero(m);
        for (e, c) in &self.terms {
            out.insert_add(*e, c.promote(m)?);
        }
        Ok(out)
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        let m = self.unified_m(o);
        let mut out = self.promote(m).unwrap();
        for (e, c) in &o.terms {
            out.insert_add(*e, c.promote(m).unwrap());
        }
        out
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        let m = self.unified_m(o);
        let mut out = Scalar::zero(m);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.insert_add(e1 + e2, c1.mul(c2));
            }
        }
        out
    }

    /// Multiplicative inverse; defined exactly for monomials c·v^e, c ≠ 0.
    pub fn invert(&self) -> Result<Scalar> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut terms = BTreeMap::new();
        terms.insert(-e, c.inv()?);
        Ok(Scalar { m: self.m, terms })
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut out = Scalar::one(self.m);
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Substitute v² = q₀ (exact). Every v-exponent must be even.
    pub fn specialize_q(&self, q0: &Rat) -> Result<Scalar> {
        let mut out = Scalar::zero(self.m);
        for (e, c) in &self.terms {
            if e % 2 != 0 {
                return Err(Error::OddExponent(*e));
            }
            let k = e / 2;
            let q_val = if k >= 0 {
                num::pow::pow(q0.clone(), k as usize)
            } else {
                if q0.is_zero() {
                    return Err(Error::NotInvertible("q = 0".into()));
                }
                num::pow::pow(q0.recip(), (-k) as usize)
            };
            out.insert_add(0, c.mul(&Cyc::from_rat(self.m, q_val)));
        }
        Ok(out)
    }

    /// Substitute v ↦ v^k (an injective ring endomorphism for k ≥ 1).
    pub fn subst_v_pow(&self, k: i64) -> Scalar {
        assert!(k >= 1);
        Scalar {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// All v-exponents even, i.e. the scalar is a Laurent polynomial in q.
    pub fn is_q_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }
}

impl std::fmt::Display for Scalar {
    /// Canonical string: terms by descending exponent, variable `q` when all
    /// v-exponents are even (halved exponents), else `v`. Round-trips through
    /// `parse_scalar`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let in_q = self.is_q_polynomial();
        let var = if in_q { "q" } else { "v" };
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let e = if in_q { e / 2 } else { *e };
            let piece = if let Some(r) = c.as_rat() {
                let mag = render_var_term(&r.abs(), var, e);
                if first {
                    if r.is_negative() {
                        format!("-{mag}")
                    } else {
                        mag
                    }
                } else if r.is_negative() {
                    format!(" - {mag}")
                } else {
                    format!(" + {mag}")
                }
            } else {
                let body = if e == 0 {
                    c.render()
                } else if e == 1 {
                    format!("{}*{var}", c.render())
                } else {
                    format!("{}*{var}^{e}", c.render())
                };
                if first {
                    body
                } else {
                    format!(" + {body}")
                }
            };
            f.write_str(&piece)?;
            first = false;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Canonical-string parser. Never panics on any input; strict enough that
// parse(render(x)) == x and loose enough to accept hand-written terms.

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!("expected integer at byte {}", self.pos)));
        }
        let lit = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let mut n: BigInt = lit.parse().map_err(|e| Error::Parse(format!("{e}")))?;
        if neg {
            n = -n;
        }
        Ok(n)
    }

    fn rational(&mut self) -> Result<Rat> {
        let n = self.integer()?;
        if self.eat(b'/') {
            let d = self.integer()?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rat::new(n, d))
        } else {
            Ok(Rat::from(n))
        }
    }
}

/// Parse one canonical scalar string in context m. Accepts variables q, v, z
/// (z only inside parentheses), signs, rationals a/b, exponents `^k`.
pub fn parse_scalar(m: u32, input: &str) -> Result<Scalar> {
    if m == 0 || m > 1_000 {
        return Err(Error::Parse(format!("unsupported cyclotomic context m={m}")));
    }
    if input.len() > 1 << 16 {
        return Err(Error::Parse("input too long".into()));
    }
    let mut lx = Lexer::new(input);
    let out = parse_sum(&mut lx, m)?;
    if lx.peek().is_some() {
        return Err(Error::Parse(format!("trailing input at byte {}", lx.pos)));
    }
    Ok(out)
}

fn parse_sum(lx: &mut Lexer, m: u32) -> Result<Scalar> {
    let mut out = Scalar::zero(m);
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            Some(b'+') => {
                lx.bump();
                false
            }
            Some(b'-') => {
                lx.bump();
                true
            }
            Some(_) if first => false,
            _ => break,
        };
        let term = parse_term(lx, m)?;
        out = if sign { out.sub(&term) } else { out.add(&term) };
        first = false;
    }
    if first {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

fn parse_term(lx: &mut Lexer, m: u32) -> Result<Scalar> {
    let coeff: Scalar = match lx.peek() {
        Some(b'(') => {
            lx.bump();
            let c = parse_zpoly(lx, m)?;
            if !lx.eat(b')') {
                return Err(Error::Parse("expected ')'".into()));
            }
            c
        }
        Some(c) if c.is_ascii_digit() => Scalar::from_rat(m, lx.rational()?),
        Some(b'q') | Some(b'v') => Scalar::one(m),
        _ => return Err(Error::Parse("expected term".into())),
    };
    let has_star = lx.eat(b'*');
    let var = match lx.peek() {
        Some(b'q') => {
            lx.bump();
            Some(2i64)
        }
        Some(b'v') => {
            lx.bump();
            Some(1i64)
        }
        _ if has_star => return Err(Error::Parse("expected variable after '*'".into())),
        _ => None,
    };
    match var {
        None => Ok(coeff),
        Some(stride) => {
            let e = if lx.eat(b'^') {
                let n = lx.integer()?;
                i64::try_from(n).map_err(|_| Error::Parse("exponent out of range".into()))?
            } else {
                1
            };
            let e = e
                .checked_mul(stride)
                .ok_or_else(|| Error::Parse("exponent out of range".into()))?;
            if e.unsigned_abs() > 1 << 20 {
                return Err(Error::Parse("exponent out of range".into()));
            }
            Ok(coeff.mul(&Scalar::v_pow(m, e)))
        }
    }
}

fn parse_zpoly(lx: &mut Lexer, m: u32) -> Result<Scalar> {
    let mut out = Scalar::zero(m);
    let mut first = true;
    loop {
        let sign = match lx.peek() {
            Some(b'+') => {
                lx.bump();
                false
            }
            Some(b'-') => {
                lx.bump();
                true
            }
            Some(_) if first => false,
            _ => break,
        };
        let coeff = match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = lx.rational()?;
                lx.eat(b'*');
                r
            }
            Some(b'z') => Rat::one(),
            _ => return Err(Error::Parse("expected z-term".into())),
        };
        let zexp = if lx.eat(b'z') {
            if lx.eat(b'^') {
                let n = lx.integer()?;
                let e = i64::try_from(n).map_err(|_| Error::Parse("exponent out of range".into()))?;
                if !(0..=1 << 12).contains(&e) {
                    return Err(Error::Parse("z-exponent out of range".into()));
                }
                e
            } else {
                1
            }
        } else {
            0
        };
        let mut t = Scalar::from_cyc(Cyc::zeta_pow(m, zexp).mul(&Cyc::from_rat(m, coeff)));
        if sign {
            t = t.neg();
        }
        out = out.add(&t);
        first = false;
    }
    if first {
        return Err(Error::Parse("empty parenthesized coefficient".into()));
    }
    Ok(out)
}
