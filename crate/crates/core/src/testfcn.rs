//! Test functions on the level-r group: functions supported on pairs
//! (torus point, affine Weyl part) with exact scalar values, the two
//! constructions of the pro-unipotent-level function (character sum and
//! closed formula), isotypic projection, the transported image in the
//! stabilizer-Levi Iwahori-Hecke algebra, spectral scalars against Satake
//! parameters, and semi-simple local L-factors.
//!
//! Every function carries the normalization of the Haar measure it was
//! built with; combining functions with different normalizations without an
//! explicit conversion is an error, because the conversion factor (q−1)^d is
//! exactly the index of the pro-unipotent radical in the parahoric.

use std::collections::BTreeMap;

use crate::admissible::{adm_set, critical_indices, is_admissible};
use crate::depthzero::{delta, delta1, stabilizer, ChiHeckeAlgebra, DepthZeroChar};
use crate::error::{Error, Result};
use crate::hecke::HeckeElem;
use crate::scalar::{Rat, Scalar};
use crate::weyl::{ExtAffElem, WeylCtx};
use num::bigint::BigInt;
use num::One;

/// Haar normalization a function was built with: total mass 1 on the
/// parahoric, or on its pro-unipotent radical.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    Iwahori,
    ProUnipotent,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Iwahori => "I",
            Measure::ProUnipotent => "I+",
        }
    }
}

/// A finitely supported function on T(k_r) ⋊ W̃, with torus points in
/// discrete logs mod p^r−1. The affine part of every support key is the
/// inverse of an admissible element.
#[derive(Clone, Debug)]
pub struct TestFunction {
    p: u64,
    r: u32,
    d: usize,
    measure: Measure,
    coeffs: BTreeMap<(Vec<u64>, ExtAffElem), Scalar>,
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.r == other.r
            && self.d == other.d
            && self.measure == other.measure
            && self.coeffs == other.coeffs
    }
}

fn checked_q(p: u64, r: u32) -> Result<i64> {
    let q = p.checked_pow(r).filter(|&q| q <= i64::MAX as u64);
    q.map(|q| q as i64).ok_or(Error::SizeGuard {
        what: "p^r",
        actual: u64::MAX,
        limit: i64::MAX as u64,
    })
}

fn for_each_tuple(n: u64, k: usize, f: &mut dyn FnMut(&[u64])) {
    let mut t = vec![0u64; k];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

impl TestFunction {
    pub fn zero(p: u64, r: u32, d: usize, measure: Measure) -> Result<Self> {
        if !crate::depthzero::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::Unsupported("level r must be at least 1".into()));
        }
        checked_q(p, r)?;
        Ok(TestFunction {
            p,
            r,
            d,
            measure,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// q = p^r, the residue cardinality at level r.
    pub fn q(&self) -> i64 {
        checked_q(self.p, self.r).expect("validated at construction")
    }

    /// p^r − 1, the order of each torus coordinate in discrete logs.
    pub fn torus_modulus(&self) -> u64 {
        (self.q() - 1) as u64
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn scalar_modulus(&self) -> u32 {
        (self.p - 1).max(1) as u32
    }

    pub fn coeffs(&self) -> &BTreeMap<(Vec<u64>, ExtAffElem), Scalar> {
        &self.coeffs
    }

    pub fn value(&self, logs: &[u64], u: &ExtAffElem) -> Scalar {
        let key = (logs.to_vec(), u.clone());
        self.coeffs
            .get(&key)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.scalar_modulus()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert(&mut self, logs: Vec<u64>, u: ExtAffElem, c: Scalar) -> Result<()> {
        if logs.len() != self.d || u.d() != self.d {
            return Err(Error::RankMismatch(logs.len().max(u.d()), self.d));
        }
        if !is_admissible(&u.inverse()) {
            return Err(Error::NotAdmissible);
        }
        debug_assert!(logs.iter().all(|&a| a < self.torus_modulus()));
        if !c.is_zero() {
            self.coeffs.insert((logs, u), c);
        }
        Ok(())
    }

    /// Multiply every value by a scalar.
    pub fn scaled(&self, c: &Scalar) -> TestFunction {
        let mut out = self.clone();
        out.coeffs.retain(|_, v| {
            *v = v.mul(c);
            !v.is_zero()
        });
        out
    }

    fn compat(&self, other: &TestFunction) -> Result<()> {
        if (self.p, self.r, self.d) != (other.p, other.r, other.d) {
            return Err(Error::ContextMismatch(self.scalar_modulus(), other.scalar_modulus()));
        }
        if self.measure != other.measure {
            return Err(Error::MeasureMismatch(
                self.measure.name(),
                other.measure.name(),
            ));
        }
        Ok(())
    }

    /// Pointwise sum; both operands must carry the same normalization.
    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        self.compat(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let cur = out
                .coeffs
                .remove(k)
                .unwrap_or_else(|| Scalar::zero(self.scalar_modulus()));
            let s = cur.add(c);
            if !s.is_zero() {
                out.coeffs.insert(k.clone(), s);
            }
        }
        Ok(out)
    }

    /// Reinterpret an Iwahori-normalized function at pro-unipotent level:
    /// values shrink by the index (q−1)^d.
    pub fn to_pro_unipotent(&self) -> Result<TestFunction> {
        if self.measure != Measure::Iwahori {
            return Err(Error::MeasureMismatch(
                self.measure.name(),
                Measure::Iwahori.name(),
            ));
        }
        let idx = BigInt::from(self.q() - 1).pow(self.d as u32);
        let factor = Scalar::from_rat(self.scalar_modulus(), Rat::new(BigInt::one(), idx));
        let mut out = self.scaled(&factor);
        out.measure = Measure::ProUnipotent;
        Ok(out)
    }

    /// Inverse reinterpretation: values grow by the index (q−1)^d.
    pub fn to_iwahori(&self) -> Result<TestFunction> {
        if self.measure != Measure::ProUnipotent {
            return Err(Error::MeasureMismatch(
                self.measure.name(),
                Measure::ProUnipotent.name(),
            ));
        }
        let idx = Scalar::from_rat(
            self.scalar_modulus(),
            Rat::from(BigInt::from(self.q() - 1).pow(self.d as u32)),
        );
        let mut out = self.scaled(&idx);
        out.measure = Measure::Iwahori;
        Ok(out)
    }

    /// Every value is a plain rational (no cyclotomic or v part).
    pub fn is_rational_valued(&self) -> bool {
        self.coeffs.values().all(|c| c.is_rational_valued())
    }

    /// Check the well-definedness guard for a character-typed function: no
    /// support key may sit at an affine part whose inverse fails the coarse
    /// selector for the character.
    pub fn check_chi_typed(&self, chi: &DepthZeroChar) -> Result<()> {
        for (_, u) in self.coeffs.keys() {
            if !delta(&u.inverse(), chi)? {
                return Err(Error::Unsupported(
                    "support at an affine part the character does not stabilize".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Value of the dual-coweight Kottwitz function at the inverse of an
/// admissible element: (1−q)^{|S(w)|−1} with S the critical set.
fn kottwitz_dual_value(ctx: &WeylCtx, w: &ExtAffElem, q: i64, m: u32) -> Result<Scalar> {
    let s = critical_indices(ctx, w)?;
    Scalar::from_int(m, 1 - q).pow(s.len() as i64 - 1)
}

/// The character-typed test function: at a key (t, w⁻¹) with w admissible
/// the value is the refined selector at (w, χ) times χ_r(t)⁻¹ times the
/// dual Kottwitz value at w, with q = p^r exact. Iwahori normalization.
pub fn phi_chi(p: u64, r: u32, chi: &DepthZeroChar) -> Result<TestFunction> {
    if chi.p() != p {
        return Err(Error::Unsupported(format!(
            "character lives at p = {}, function at p = {}",
            chi.p(),
            p
        )));
    }
    let d = chi.d();
    let mut out = TestFunction::zero(p, r, d, Measure::Iwahori)?;
    let q = out.q();
    let m = out.scalar_modulus();
    let big_m = out.torus_modulus();
    let ctx = WeylCtx::gl(d);
    for w in adm_set(&ctx) {
        if !delta1(&w, chi)? {
            continue;
        }
        assert!(
            delta(&w, chi)?,
            "refined selector passed but the coarse one failed"
        );
        let k_val = kottwitz_dual_value(&ctx, &w, q, m)?;
        let u = w.inverse();
        let mut rows: Vec<(Vec<u64>, Scalar)> = Vec::new();
        for_each_tuple(big_m, d, &mut |logs| {
            let neg: Vec<u64> = logs.iter().map(|&a| (big_m - a) % big_m).collect();
            let chi_inv = chi.value_r(&neg).expect("rank checked");
            rows.push((logs.to_vec(), chi_inv.mul(&k_val)));
        });
        for (logs, c) in rows {
            out.insert(logs, u.clone(), c)?;
        }
    }
    Ok(out)
}

/// The pro-unipotent-level function, by summation: the average of the
/// character-typed functions over all (p−1)^d characters, with the index
/// (q−1)^d divided out. Values are asserted rational.
pub fn phi_one_sum(p: u64, r: u32, d: usize) -> Result<TestFunction> {
    let mut total = TestFunction::zero(p, r, d, Measure::Iwahori)?;
    for_each_tuple_result(p - 1, d, &mut |exps| {
        let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
        let chi = DepthZeroChar::new(p, &signed)?;
        total = total.add(&phi_chi(p, r, &chi)?)?;
        Ok(())
    })?;
    let out = total.to_pro_unipotent()?;
    assert!(
        out.is_rational_valued(),
        "character sum left a cyclotomic residue"
    );
    Ok(out)
}

fn for_each_tuple_result(
    n: u64,
    k: usize,
    f: &mut dyn FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    let mut t = vec![0u64; k];
    loop {
        f(&t)?;
        let mut i = 0;
        loop {
            if i == k {
                return Ok(());
            }
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// The pro-unipotent-level function, by the closed formula: supported on
/// keys (t, w⁻¹) with w admissible and the norm of t lying in the critical
/// subtorus (all logs off the critical set divisible by p−1), with value
/// (−1)^d (p−1)^{d−|S(w)|} (1−q)^{|S(w)|−d−1}.
pub fn phi_one_explicit(p: u64, r: u32, d: usize) -> Result<TestFunction> {
    let mut out = TestFunction::zero(p, r, d, Measure::ProUnipotent)?;
    let q = out.q();
    let m = out.scalar_modulus();
    let big_m = out.torus_modulus();
    let base = p - 1;
    let ctx = WeylCtx::gl(d);
    for w in adm_set(&ctx) {
        let s = critical_indices(&ctx, &w)?;
        let ns = s.len();
        let sign = if d % 2 == 0 { 1 } else { -1 };
        let value = Scalar::from_int(m, sign)
            .mul(&Scalar::from_int(m, base as i64).pow((d - ns) as i64)?)
            .mul(&Scalar::from_int(m, 1 - q).pow(ns as i64 - d as i64 - 1)?);
        let u = w.inverse();
        let mut keys: Vec<Vec<u64>> = Vec::new();
        for_each_tuple(big_m, d, &mut |logs| {
            let in_critical_torus = logs
                .iter()
                .enumerate()
                .all(|(i, &a)| s.contains(i + 1) || a % base == 0);
            if in_critical_torus {
                keys.push(logs.to_vec());
            }
        });
        for logs in keys {
            out.insert(logs, u.clone(), value.clone())?;
        }
    }
    Ok(out)
}

/// Left convolution with the idempotent of the level-r inflation of `chi`,
/// in closed form: the result at (t, u) is χ_r(t)⁻¹ (q−1)^{−d} times the
/// χ_r-weighted column sum of the input at u. A direct convolution oracle
/// cross-checks the result whenever the support is small enough.
pub fn project_component(f: &TestFunction, chi: &DepthZeroChar) -> Result<TestFunction> {
    if f.measure() != Measure::ProUnipotent {
        return Err(Error::MeasureMismatch(
            f.measure().name(),
            Measure::ProUnipotent.name(),
        ));
    }
    if chi.p() != f.p() || chi.d() != f.d() {
        return Err(Error::RankMismatch(chi.d(), f.d()));
    }
    let d = f.d();
    let m = f.scalar_modulus();
    let big_m = f.torus_modulus();
    let inv_order = Scalar::from_rat(
        m,
        Rat::new(BigInt::one(), BigInt::from(big_m).pow(d as u32)),
    );

    let mut column_sums: BTreeMap<ExtAffElem, Scalar> = BTreeMap::new();
    for ((logs, u), c) in f.coeffs() {
        let weighted = chi.value_r(logs)?.mul(c);
        let cur = column_sums
            .remove(u)
            .unwrap_or_else(|| Scalar::zero(m));
        let s = cur.add(&weighted);
        if !s.is_zero() {
            column_sums.insert(u.clone(), s);
        }
    }

    let mut out = TestFunction::zero(f.p(), f.r(), d, Measure::ProUnipotent)?;
    for (u, col) in &column_sums {
        let mut rows: Vec<(Vec<u64>, Scalar)> = Vec::new();
        for_each_tuple(big_m, d, &mut |logs| {
            let neg: Vec<u64> = logs.iter().map(|&a| (big_m - a) % big_m).collect();
            let chi_inv = chi.value_r(&neg).expect("rank checked");
            rows.push((logs.to_vec(), chi_inv.mul(col).mul(&inv_order)));
        });
        for (logs, c) in rows {
            out.insert(logs, u.clone(), c)?;
        }
    }

    let torus_points = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(big_m));
    let work = torus_points.and_then(|n| n.checked_mul(f.coeffs().len() as u64));
    if work.is_some_and(|w| w <= 500_000) {
        let naive = convolve_idempotent_naive(f, chi)?;
        assert_eq!(out, naive, "closed-form projection disagrees with convolution");
    }
    Ok(out)
}

/// Direct convolution of the character idempotent against the function:
/// out(t, u) = Σ_s e(s) f(t−s, u) over the whole torus.
fn convolve_idempotent_naive(f: &TestFunction, chi: &DepthZeroChar) -> Result<TestFunction> {
    let d = f.d();
    let m = f.scalar_modulus();
    let big_m = f.torus_modulus();
    let inv_order = Scalar::from_rat(
        m,
        Rat::new(BigInt::one(), BigInt::from(big_m).pow(d as u32)),
    );
    let mut acc: BTreeMap<(Vec<u64>, ExtAffElem), Scalar> = BTreeMap::new();
    let mut shifts: Vec<(Vec<u64>, Scalar)> = Vec::new();
    for_each_tuple(big_m, d, &mut |s_logs| {
        let neg: Vec<u64> = s_logs.iter().map(|&a| (big_m - a) % big_m).collect();
        let e_val = chi.value_r(&neg).expect("rank checked").mul(&inv_order);
        shifts.push((s_logs.to_vec(), e_val));
    });
    for ((logs, u), c) in f.coeffs() {
        for (s_logs, e_val) in &shifts {
            let t: Vec<u64> = logs
                .iter()
                .zip(s_logs)
                .map(|(&a, &s)| (a + s) % big_m)
                .collect();
            let add = e_val.mul(c);
            let cur = acc
                .remove(&(t.clone(), u.clone()))
                .unwrap_or_else(|| Scalar::zero(m));
            let sum = cur.add(&add);
            if !sum.is_zero() {
                acc.insert((t, u.clone()), sum);
            }
        }
    }
    let mut out = TestFunction::zero(f.p(), f.r(), d, Measure::ProUnipotent)?;
    for ((logs, u), c) in acc {
        out.insert(logs, u, c)?;
    }
    Ok(out)
}

/// Image of the character-typed test function in the Iwahori-Hecke algebra
/// of the stabilizer Levi, computed two ways and asserted equal: through
/// the length-corrected change of basis coefficient by coefficient, and as
/// v^{(pairing gap)} times the level-r dual Kottwitz element of the Levi.
/// The image is asserted central. Errors when no coordinate of the
/// character is trivial.
pub fn psi_image_of_phi(p: u64, r: u32, chi: &DepthZeroChar) -> Result<HeckeElem> {
    let st = stabilizer(chi)?;
    if st.trivial_block().is_empty() {
        return Err(Error::Unsupported(
            "character has no trivial coordinate; the test function is zero".into(),
        ));
    }
    let d = chi.d();
    let alg = ChiHeckeAlgebra::new(chi)?;
    let m = alg.m();
    let q = checked_q(p, r)?;
    let ctx = WeylCtx::gl(d);

    // Route 1: basis coefficients of the test function at torus-trivial
    // keys, pushed through the change of basis.
    let mut coeffs = BTreeMap::new();
    for w in adm_set(&ctx) {
        if !delta1(&w, chi)? {
            continue;
        }
        coeffs.insert(w.inverse(), kottwitz_dual_value(&ctx, &w, q, m)?);
    }
    let transported = alg.transport(&alg.elem(coeffs)?)?;

    // Route 2: the closed form on the Levi side.
    let full_alg = crate::hecke::Algebra::new(ctx.clone(), m);
    let mut mu_star = vec![0i64; d];
    mu_star[d - 1] = -1;
    let p1 = full_alg.two_rho_pairing(&mu_star);
    let mu1_dual = st.mu1_dual().expect("trivial block is nonempty");
    let p2 = alg.levi_algebra().two_rho_pairing(&mu1_dual);
    let v_gap = Scalar::v_pow(m, p1 - p2);
    let k_levi = alg.levi_algebra().k_mu(&mu1_dual)?;
    let image_sym = k_levi.scale(&v_gap);
    let mut closed = full_alg.zero();
    for (w, c) in k_levi.terms() {
        let spec = c.specialize_q(&Rat::from(BigInt::from(q)))?;
        closed = closed.add(&alg.levi_algebra().t_basis(w).scale(&spec.mul(&v_gap)));
    }

    assert_eq!(
        transported, closed,
        "transported image disagrees with the closed form"
    );
    // Centrality lives in the symbolic algebra, where the quadratic
    // relation and the coefficients share one parameter; the level-r image
    // is its specialization.
    assert!(
        alg.levi_algebra().is_central(&image_sym),
        "image is not central in the Levi algebra"
    );
    Ok(transported)
}

/// Satake-parameter data for one unramified twist: the character, the twist
/// parameters (one invertible scalar per coordinate), and the level.
#[derive(Clone, Debug)]
pub struct LanglandsParamData {
    chi: DepthZeroChar,
    eta: Vec<Scalar>,
    p: u64,
    r: u32,
}

impl LanglandsParamData {
    pub fn new(chi: DepthZeroChar, eta: Vec<Scalar>, p: u64, r: u32) -> Result<Self> {
        if chi.p() != p {
            return Err(Error::Unsupported(format!(
                "character lives at p = {}, parameter at p = {}",
                chi.p(),
                p
            )));
        }
        if eta.len() != chi.d() {
            return Err(Error::RankMismatch(eta.len(), chi.d()));
        }
        if r == 0 {
            return Err(Error::Unsupported("level r must be at least 1".into()));
        }
        checked_q(p, r)?;
        for x in &eta {
            if x.m() != chi.scalar_modulus() {
                return Err(Error::ContextMismatch(x.m(), chi.scalar_modulus()));
            }
            x.invert()?;
        }
        Ok(LanglandsParamData { chi, eta, p, r })
    }

    pub fn chi(&self) -> &DepthZeroChar {
        &self.chi
    }

    pub fn eta(&self) -> &[Scalar] {
        &self.eta
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }
}

/// Monomial η^ν = Π η_j^{ν_j}.
fn eta_monomial(eta: &[Scalar], nu: &[i64]) -> Result<Scalar> {
    let m = eta[0].m();
    let mut acc = Scalar::one(m);
    for (x, &e) in eta.iter().zip(nu) {
        acc = acc.mul(&x.pow(e)?);
    }
    Ok(acc)
}

/// Scalar by which the transported test function acts on the unramified
/// principal series with the given Satake parameters, in units where v
/// stands for the square root of p. Two routes are computed and asserted
/// equal: the orbit sum v^{r(d−1)} Σ_ν η^{rν} over the stabilizer orbit of
/// the dual coweight, and the evaluation of the level-r base change of the
/// commuting-subalgebra coefficients of the Levi-side image. Returns zero
/// when no coordinate of the character is trivial.
pub fn spectral_scalar(param: &LanglandsParamData) -> Result<Scalar> {
    let chi = param.chi();
    let d = chi.d();
    let m = chi.scalar_modulus();
    let st = stabilizer(chi)?;
    if st.trivial_block().is_empty() {
        return Ok(Scalar::zero(m));
    }
    let r = param.r() as i64;

    // Route A: the orbit sum. The orbit of the dual coweight under the
    // stabilizer is the set of −e_j over trivial coordinates j.
    let mut orbit_sum = Scalar::zero(m);
    for &j in st.trivial_block() {
        let mut nu = vec![0i64; d];
        nu[j - 1] = -r;
        orbit_sum = orbit_sum.add(&eta_monomial(param.eta(), &nu)?);
    }
    let route_a = Scalar::v_pow(m, r * (d as i64 - 1)).mul(&orbit_sum);

    // Route B: symbolic Levi-side image, commuting-subalgebra coefficients,
    // level-r base change, then evaluation at the parameters.
    let alg = ChiHeckeAlgebra::new(chi)?;
    let full_alg = crate::hecke::Algebra::new(WeylCtx::gl(d), m);
    let mut mu_star = vec![0i64; d];
    mu_star[d - 1] = -1;
    let p1 = full_alg.two_rho_pairing(&mu_star);
    let mu1_dual = st.mu1_dual().expect("trivial block is nonempty");
    let p2 = alg.levi_algebra().two_rho_pairing(&mu1_dual);
    let image_sym = alg
        .levi_algebra()
        .k_mu(&mu1_dual)?
        .scale(&Scalar::v_pow(m, p1 - p2));
    let coeffs = alg.levi_algebra().bernstein_coeffs(&image_sym)?;
    let route_b = coeffs
        .base_change(param.r())?
        .subst_v_pow(r)
        .eval(param.eta())?;

    assert_eq!(route_a, route_b, "spectral routes disagree");
    Ok(route_a)
}

/// A semi-simple local L-factor: the inverse-determinant denominator and
/// the truncated logarithmic expansion that certified it.
#[derive(Clone, Debug, PartialEq)]
pub struct LssFactor {
    /// Coefficients of det(1 − A·u) by ascending power of u; the L-factor
    /// is the reciprocal of this polynomial.
    pub denominator: Vec<Scalar>,
    /// Power-series coefficients of the L-factor itself, to the requested
    /// order.
    pub series: Vec<Scalar>,
}

/// Semi-simple local L-factor of the parameter: the Frobenius matrix is
/// diagonal on the invariant weights (one per trivial coordinate of the
/// character) with eigenvalue η_j⁻¹ there. Certifies det⁻¹ against
/// exp(Σ tr(A^k) u^k / k) to the requested order. With no trivial
/// coordinate the factor is identically 1.
pub fn lss_factor(param: &LanglandsParamData, order: usize) -> Result<LssFactor> {
    if order == 0 {
        return Err(Error::Unsupported("series order must be at least 1".into()));
    }
    let chi = param.chi();
    let m = chi.scalar_modulus();
    let st = stabilizer(chi)?;
    let eigen: Vec<Scalar> = st
        .trivial_block()
        .iter()
        .map(|&j| param.eta()[j - 1].invert())
        .collect::<Result<_>>()?;

    // denominator Π (1 − a_j u), exact
    let mut denom = vec![Scalar::one(m)];
    for a in &eigen {
        let mut next = vec![Scalar::zero(m); denom.len() + 1];
        for (i, c) in denom.iter().enumerate() {
            next[i] = next[i].add(c);
            next[i + 1] = next[i + 1].sub(&c.mul(a));
        }
        denom = next;
    }

    // series route 1: power-series inverse of the denominator
    let mut inv = vec![Scalar::zero(m); order + 1];
    inv[0] = Scalar::one(m);
    for n in 1..=order {
        let mut acc = Scalar::zero(m);
        for k in 1..=n.min(denom.len() - 1) {
            acc = acc.add(&denom[k].mul(&inv[n - k]));
        }
        inv[n] = acc.neg();
    }

    // series route 2: exp of the trace sums
    let mut log_series = vec![Scalar::zero(m); order + 1];
    for (k, slot) in log_series.iter_mut().enumerate().skip(1) {
        let mut tr = Scalar::zero(m);
        for a in &eigen {
            tr = tr.add(&a.pow(k as i64)?);
        }
        *slot = tr.mul(&Scalar::from_rat(m, crate::scalar::rat(1, k as i64)));
    }
    let exp_series = truncated_exp(&log_series, order, m)?;

    assert_eq!(
        inv, exp_series,
        "determinant expansion disagrees with the trace exponential"
    );
    Ok(LssFactor {
        denominator: denom,
        series: inv,
    })
}

/// exp of a power series with zero constant term, truncated at `order`.
fn truncated_exp(x: &[Scalar], order: usize, m: u32) -> Result<Vec<Scalar>> {
    assert!(x[0].is_zero(), "exponential needs zero constant term");
    let mut out = vec![Scalar::zero(m); order + 1];
    out[0] = Scalar::one(m);
    let mut term = out.clone(); // x^j / j!
    for j in 1..=order {
        // term ← term·x / j
        let mut next = vec![Scalar::zero(m); order + 1];
        for (a, ca) in term.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in x.iter().enumerate() {
                if a + b > order || cb.is_zero() {
                    continue;
                }
                next[a + b] = next[a + b].add(&ca.mul(cb));
            }
        }
        let inv_j = Scalar::from_rat(m, crate::scalar::rat(1, j as i64));
        for c in next.iter_mut() {
            *c = c.mul(&inv_j);
        }
        term = next;
        for (o, t) in out.iter_mut().zip(&term) {
            *o = o.add(t);
        }
        if term.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    Ok(out)
}

/// Semi-simple Frobenius trace at a stratum point: lift the torus argument
/// from the quotient off the critical set (zero logs on the critical set,
/// the given logs elsewhere), evaluate the character-typed function at the
/// inverse pair, and certify both lift-independence and the factored form
/// selector × character value × Kottwitz value.
pub fn trace_frobenius_eval(
    w: &ExtAffElem,
    t_x: &[u64],
    chi: &DepthZeroChar,
    r: u32,
) -> Result<Scalar> {
    let d = chi.d();
    if w.d() != d || t_x.len() != d {
        return Err(Error::RankMismatch(w.d().max(t_x.len()), d));
    }
    if !is_admissible(w) {
        return Err(Error::NotAdmissible);
    }
    let p = chi.p();
    let phi = phi_chi(p, r, chi)?;
    let big_m = phi.torus_modulus();
    let base = p - 1;
    let ctx = WeylCtx::gl(d);
    let s = critical_indices(&ctx, w)?;

    let lift: Vec<u64> = (0..d)
        .map(|i| if s.contains(i + 1) { 0 } else { t_x[i] % base })
        .collect();
    let eval_at = |lift: &[u64]| -> Scalar {
        let inv: Vec<u64> = lift.iter().map(|&a| (big_m - a % big_m) % big_m).collect();
        phi.value(&inv, &w.inverse())
    };
    let result = eval_at(&lift);

    // lift independence: shift any coordinate by multiples of p−1, and the
    // critical coordinates arbitrarily
    let steps = big_m / base;
    for i in 0..d {
        for k in 1..steps.min(4) {
            let mut other = lift.clone();
            other[i] = (other[i] + k * base) % big_m;
            assert_eq!(eval_at(&other), result, "lift changed the trace");
        }
        if s.contains(i + 1) {
            for a in 1..big_m.min(4) {
                let mut other = lift.clone();
                other[i] = a;
                assert_eq!(eval_at(&other), result, "critical lift changed the trace");
            }
        }
    }

    // factored form
    let m = chi.scalar_modulus();
    let expected = if delta1(w, chi)? {
        let off: Vec<u64> = (0..d)
            .map(|i| if s.contains(i + 1) { 0 } else { t_x[i] % base })
            .collect();
        chi.value(&off)?
            .mul(&kottwitz_dual_value(&ctx, w, phi.q(), m)?)
    } else {
        Scalar::zero(m)
    };
    assert_eq!(result, expected, "factored form disagrees");
    Ok(result)
}

// ---------------------------------------------------------------------------
