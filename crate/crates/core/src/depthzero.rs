//! Depth-zero characters of the diagonal torus over the residue field, the
//! combinatorics they induce, and the change of basis into the Iwahori-Hecke
//! algebra of their stabilizer Levi.
//!
//! A character is a vector of exponents mod p−1 (coordinate j acts on the
//! j-th 𝔾_m factor through the fixed primitive root ζ_{p−1}). Everything
//! downstream is exact: character values are cyclotomic scalars with modulus
//! m = p−1, and the level-r torus T(k_r) is handled entirely in discrete
//! logs mod p^r−1, with the norm to the base field realized as reduction
//! mod p−1.

use std::collections::{BTreeMap, BTreeSet};

use crate::admissible::{critical_indices, is_admissible, LeviDatum};
use crate::error::{Error, Result};
use crate::hecke::{Algebra, HeckeElem};
use crate::perm::Perm;
use crate::scalar::{Rat, Scalar};
use crate::weyl::{ExtAffElem, WeylCtx};
use num::bigint::BigInt;
use num::One;

/// Trial-division primality check; inputs stay desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Norm from k_r^× to 𝔽_p^× in discrete logs: a generator g of k_r^× has
/// norm g^{(p^r−1)/(p−1)}, so the log of the norm is the log mod p−1.
pub fn norm_to_base(p: u64, a: u64) -> u64 {
    a % (p - 1)
}

// ---------------------------------------------------------------------------
// Characters.

/// A character of T(𝔽_p) = (𝔽_p^×)^d, stored as exponents mod p−1 with
/// respect to a fixed generator of 𝔽_p^×. The level-r inflation through the
/// norm map has the same exponents read mod p−1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepthZeroChar {
    p: u64,
    exps: Vec<u64>,
}

impl DepthZeroChar {
    pub fn new(p: u64, exps: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > (1 << 31) {
            return Err(Error::SizeGuard {
                what: "prime p",
                actual: p,
                limit: 1 << 31,
            });
        }
        if exps.is_empty() {
            return Err(Error::Unsupported("character needs at least one coordinate".into()));
        }
        let m = (p - 1) as i64;
        Ok(DepthZeroChar {
            p,
            exps: exps.iter().map(|&e| e.rem_euclid(m) as u64).collect(),
        })
    }

    pub fn trivial(p: u64, d: usize) -> Result<Self> {
        DepthZeroChar::new(p, &vec![0; d])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.exps.len()
    }

    /// Order of the value group: exponents live mod p−1.
    pub fn modulus(&self) -> u64 {
        self.p - 1
    }

    /// Cyclotomic modulus for every scalar this character produces.
    pub fn scalar_modulus(&self) -> u32 {
        (self.p - 1).max(1) as u32
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Value at a point of T(𝔽_p) given by discrete logs mod p−1.
    pub fn value(&self, logs: &[u64]) -> Result<Scalar> {
        if logs.len() != self.d() {
            return Err(Error::RankMismatch(logs.len(), self.d()));
        }
        let m = self.p - 1;
        let mut acc: u128 = 0;
        for (e, a) in self.exps.iter().zip(logs) {
            acc += (*e as u128) * ((a % m) as u128);
        }
        Ok(Scalar::zeta_pow(self.scalar_modulus(), (acc % m as u128) as i64))
    }

    /// Value of the level-r inflation at a point of T(k_r) given by discrete
    /// logs mod p^r−1: compose with the norm coordinatewise.
    pub fn value_r(&self, logs: &[u64]) -> Result<Scalar> {
        let reduced: Vec<u64> = logs.iter().map(|&a| norm_to_base(self.p, a)).collect();
        self.value(&reduced)
    }

    /// Conjugate character: position i of the result reads position w⁻¹(i),
    /// matching evaluation at w⁻¹tw.
    pub fn conjugate(&self, w: &Perm) -> Result<DepthZeroChar> {
        if w.d() != self.d() {
            return Err(Error::RankMismatch(w.d(), self.d()));
        }
        Ok(DepthZeroChar {
            p: self.p,
            exps: w.act(&self.exps),
        })
    }
}

// ---------------------------------------------------------------------------
// Stabilizer data.

/// The stabilizer of a character inside S_d: the block permutations of the
/// level sets of the exponent vector, together with the block partition, the
/// set of coordinates where the character is trivial, and the dominant basis
/// coweight of that set when it is nonempty.
#[derive(Clone, Debug)]
pub struct CharStabilizer {
    levi: LeviDatum,
    w_chi: Vec<Perm>,
    trivial_block: Vec<usize>,
    mu1: Option<Vec<i64>>,
}

impl CharStabilizer {
    pub fn levi(&self) -> &LeviDatum {
        &self.levi
    }

    /// All permutations fixing the character, sorted by one-line notation.
    pub fn w_chi(&self) -> &[Perm] {
        &self.w_chi
    }

    /// 1-indexed coordinates with trivial character component; may be empty.
    pub fn trivial_block(&self) -> &[usize] {
        &self.trivial_block
    }

    /// Dominant basis coweight supported on the trivial block: 1 at the
    /// smallest trivial coordinate. Absent when no coordinate is trivial.
    pub fn mu1(&self) -> Option<&[i64]> {
        self.mu1.as_deref()
    }

    /// Dual of `mu1`: −1 at the largest trivial coordinate.
    pub fn mu1_dual(&self) -> Option<Vec<i64>> {
        let last = *self.trivial_block.last()?;
        let mut v = vec![0i64; self.levi.d];
        v[last - 1] = -1;
        Some(v)
    }

    pub fn d(&self) -> usize {
        self.levi.d
    }
}

fn all_perms(d: usize) -> Vec<Perm> {
    let mut line: Vec<u32> = (1..=d as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(Perm::from_one_line_1indexed(&line).unwrap());
        // next_permutation in lexicographic order
        let n = line.len();
        let mut i = n.wrapping_sub(1);
        while i > 0 && line[i - 1] >= line[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while line[j] <= line[i - 1] {
            j -= 1;
        }
        line.swap(i - 1, j);
        line[i..].reverse();
    }
    out
}

/// Closure of a generating set of permutations under composition.
fn perm_closure(d: usize, gens: &[Perm]) -> Vec<Perm> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue = vec![Perm::identity(d)];
    seen.insert(Perm::identity(d).one_line_1indexed());
    while let Some(w) = queue.pop() {
        for g in gens {
            let next = g.compose(&w);
            if seen.insert(next.one_line_1indexed()) {
                queue.push(next);
            }
        }
    }
    seen.into_iter()
        .map(|line| Perm::from_one_line_1indexed(&line).unwrap())
        .collect()
}

/// Level sets of the exponent vector as 1-indexed blocks, ordered by their
/// smallest member.
fn level_set_blocks(chi: &DepthZeroChar) -> Vec<Vec<usize>> {
    let mut by_value: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &e) in chi.exps().iter().enumerate() {
        by_value.entry(e).or_default().push(i + 1);
    }
    let mut blocks: Vec<Vec<usize>> = by_value.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    blocks
}

/// Stabilizer data of a character. The subgroup generated by the in-block
/// transpositions is compared with the full fixing subgroup of S_d whenever
/// the rank allows exhaustive enumeration; the two always agree here.
pub fn stabilizer(chi: &DepthZeroChar) -> Result<CharStabilizer> {
    let d = chi.d();
    let blocks = level_set_blocks(chi);
    let levi = LeviDatum::new(d, blocks.clone())?;

    let mut gens = Vec::new();
    for block in &blocks {
        for pair in block.windows(2) {
            gens.push(Perm::transposition(d, pair[0] - 1, pair[1] - 1));
        }
    }
    let w_chi = perm_closure(d, &gens);

    for w in &w_chi {
        assert_eq!(
            &chi.conjugate(w)?,
            chi,
            "generated stabilizer contains a non-fixing permutation"
        );
    }
    if d <= 6 {
        let fixing: Vec<Perm> = all_perms(d)
            .into_iter()
            .filter(|w| chi.conjugate(w).unwrap() == *chi)
            .collect();
        assert_eq!(
            fixing, w_chi,
            "reflection subgroup differs from the full stabilizer"
        );
    }

    let trivial_block: Vec<usize> = chi
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e == 0)
        .map(|(i, _)| i + 1)
        .collect();
    let mu1 = if trivial_block.is_empty() {
        None
    } else {
        let mut v = vec![0i64; d];
        v[trivial_block[0] - 1] = 1;
        Some(v)
    };

    Ok(CharStabilizer {
        levi,
        w_chi,
        trivial_block,
        mu1,
    })
}

// ---------------------------------------------------------------------------
// Selector functions on admissible elements.

/// Iterate over all k-tuples with entries in 0..n.
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

const KERNEL_ENUM_LIMIT: u64 = 200_000;

/// Whether the exponent functional kills the subgroup of (ℤ/(p−1))^S cut out
/// by `sum_zero` (sum ≡ 0) or not (the full group). Enumerates the subgroup
/// outright at small sizes; otherwise tests the difference resp. basis
/// generators, which span the same subgroup.
fn trivial_on_kernel(chi: &DepthZeroChar, s: &[usize], sum_zero: bool) -> bool {
    let m = chi.p() - 1;
    let k = s.len();
    let exps: Vec<u64> = s.iter().map(|&j| chi.exps()[j - 1]).collect();
    let size = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(m));
    if size.is_some_and(|n| n <= KERNEL_ENUM_LIMIT) {
        let mut ok = true;
        for_each_tuple(m, k, &mut |t| {
            if sum_zero && t.iter().sum::<u64>() % m != 0 {
                return;
            }
            let pairing: u128 = exps.iter().zip(t).map(|(&e, &a)| e as u128 * a as u128).sum();
            if pairing % m as u128 != 0 {
                ok = false;
            }
        });
        ok
    } else if sum_zero {
        exps.windows(2).all(|pair| pair[0] == pair[1])
    } else {
        exps.iter().all(|&e| e == 0)
    }
}

/// Selector: 1 exactly when the character is constant across the critical
/// indices of `w`. Three formulations are computed independently and must
/// agree: constancy of the exponents, containment of the critical set in a
/// single level-set block, and triviality on the norm-one part of the
/// critical subtorus. Requires `w` admissible.
pub fn delta(w: &ExtAffElem, chi: &DepthZeroChar) -> Result<bool> {
    if w.d() != chi.d() {
        return Err(Error::RankMismatch(w.d(), chi.d()));
    }
    if !is_admissible(w) {
        return Err(Error::NotAdmissible);
    }
    let ctx = WeylCtx::gl(w.d());
    let s = critical_indices(&ctx, w)?;

    let first = chi.exps()[s.indices()[0] - 1];
    let constant = s.indices().iter().all(|&j| chi.exps()[j - 1] == first);

    let in_one_block = level_set_blocks(chi)
        .iter()
        .any(|b| s.is_subset_of(b));

    let kernel_trivial = trivial_on_kernel(chi, s.indices(), true);

    assert_eq!(constant, in_one_block, "selector formulations disagree");
    assert_eq!(constant, kernel_trivial, "selector formulations disagree");

    if constant {
        assert_eq!(
            &chi.conjugate(w.perm())?,
            chi,
            "selector holds but the finite part moves the character"
        );
    }
    Ok(constant)
}

/// Refined selector: 1 exactly when the character is trivial on every
/// critical index of `w`, equivalently trivial on the whole critical
/// subtorus; both formulations computed and compared. Requires `w`
/// admissible.
pub fn delta1(w: &ExtAffElem, chi: &DepthZeroChar) -> Result<bool> {
    if w.d() != chi.d() {
        return Err(Error::RankMismatch(w.d(), chi.d()));
    }
    if !is_admissible(w) {
        return Err(Error::NotAdmissible);
    }
    let ctx = WeylCtx::gl(w.d());
    let s = critical_indices(&ctx, w)?;

    let all_zero = s.indices().iter().all(|&j| chi.exps()[j - 1] == 0);
    let full_kernel = trivial_on_kernel(chi, s.indices(), false);
    assert_eq!(all_zero, full_kernel, "refined selector formulations disagree");
    Ok(all_zero)
}

// ---------------------------------------------------------------------------
// Group algebra of the level-r torus.

/// Group algebra of T(k_r) = (k_r^×)^d in discrete logs mod p^r−1, with
/// cyclotomic coefficients of modulus p−1 (sufficient for every idempotent
/// materialized here: all characters in play factor through the norm).
#[derive(Clone, Debug)]
pub struct TorusGroupAlgebra {
    p: u64,
    r: u32,
    d: usize,
    modulus: u64,
}

/// Finitely supported map (ℤ/(p^r−1))^d → scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusAlgElem {
    modulus: u64,
    d: usize,
    coeffs: BTreeMap<Vec<u64>, Scalar>,
}

impl TorusAlgElem {
    pub fn coeffs(&self) -> &BTreeMap<Vec<u64>, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, logs: &[u64]) -> Option<&Scalar> {
        self.coeffs.get(logs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }
}

const TORUS_SIZE_LIMIT: u64 = 4_000_000;

impl TorusGroupAlgebra {
    pub fn new(p: u64, r: u32, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::Unsupported("level r must be at least 1".into()));
        }
        let q = p
            .checked_pow(r)
            .ok_or(Error::SizeGuard {
                what: "p^r",
                actual: u64::MAX,
                limit: u64::MAX / 2,
            })?;
        let modulus = q - 1;
        let size = (0..d).try_fold(1u64, |acc, _| acc.checked_mul(modulus));
        match size {
            Some(n) if n <= TORUS_SIZE_LIMIT => {}
            _ => {
                return Err(Error::SizeGuard {
                    what: "|T(k_r)|",
                    actual: size.unwrap_or(u64::MAX),
                    limit: TORUS_SIZE_LIMIT,
                })
            }
        }
        Ok(TorusGroupAlgebra { p, r, d, modulus })
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

    /// p^r − 1, the order of each coordinate group.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn scalar_modulus(&self) -> u32 {
        (self.p - 1).max(1) as u32
    }

    pub fn zero(&self) -> TorusAlgElem {
        TorusAlgElem {
            modulus: self.modulus,
            d: self.d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn point_mass(&self, logs: &[u64], c: Scalar) -> Result<TorusAlgElem> {
        if logs.len() != self.d {
            return Err(Error::RankMismatch(logs.len(), self.d));
        }
        if c.m() != self.scalar_modulus() {
            return Err(Error::ContextMismatch(c.m(), self.scalar_modulus()));
        }
        let key: Vec<u64> = logs.iter().map(|&a| a % self.modulus).collect();
        let mut out = self.zero();
        if !c.is_zero() {
            out.coeffs.insert(key, c);
        }
        Ok(out)
    }

    /// Identity of the group algebra: the point mass at the group identity.
    pub fn identity(&self) -> TorusAlgElem {
        self.point_mass(&vec![0; self.d], Scalar::one(self.scalar_modulus()))
            .expect("identity key is valid")
    }

    fn compat(&self, x: &TorusAlgElem) -> Result<()> {
        if x.d != self.d {
            return Err(Error::RankMismatch(x.d, self.d));
        }
        if x.modulus != self.modulus {
            return Err(Error::ContextMismatch(x.modulus as u32, self.modulus as u32));
        }
        Ok(())
    }

    pub fn add(&self, a: &TorusAlgElem, b: &TorusAlgElem) -> Result<TorusAlgElem> {
        self.compat(a)?;
        self.compat(b)?;
        let mut out = a.clone();
        for (k, c) in &b.coeffs {
            let cur = out.coeffs.remove(k).unwrap_or_else(|| Scalar::zero(c.m()));
            let s = cur.add(c);
            if !s.is_zero() {
                out.coeffs.insert(k.clone(), s);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, a: &TorusAlgElem, c: &Scalar) -> Result<TorusAlgElem> {
        self.compat(a)?;
        let mut out = a.clone();
        for v in out.coeffs.values_mut() {
            *v = v.mul(c);
        }
        out.prune();
        Ok(out)
    }

    /// Convolution: the bilinear extension of addition of discrete logs.
    pub fn convolve(&self, a: &TorusAlgElem, b: &TorusAlgElem) -> Result<TorusAlgElem> {
        self.compat(a)?;
        self.compat(b)?;
        let mut out = self.zero();
        for (s, cs) in &a.coeffs {
            for (t, ct) in &b.coeffs {
                let key: Vec<u64> = s
                    .iter()
                    .zip(t)
                    .map(|(&x, &y)| (x + y) % self.modulus)
                    .collect();
                let prod = cs.mul(ct);
                let cur = out.coeffs.remove(&key).unwrap_or_else(|| Scalar::zero(prod.m()));
                let sum = cur.add(&prod);
                if !sum.is_zero() {
                    out.coeffs.insert(key, sum);
                }
            }
        }
        Ok(out)
    }

    /// Conjugation action of a finite Weyl element: the result at a point is
    /// the original at the point with coordinates read through the
    /// permutation.
    pub fn conj_by_perm(&self, a: &TorusAlgElem, w: &Perm) -> Result<TorusAlgElem> {
        self.compat(a)?;
        if w.d() != self.d {
            return Err(Error::RankMismatch(w.d(), self.d));
        }
        let mut out = self.zero();
        for (k, c) in &a.coeffs {
            out.coeffs.insert(w.act(k), c.clone());
        }
        Ok(out)
    }

    /// 1/|T(k_r)| as an exact scalar.
    fn inv_order(&self) -> Scalar {
        let order = BigInt::from(self.modulus).pow(self.d as u32);
        Scalar::from_rat(self.scalar_modulus(), Rat::new(BigInt::one(), order))
    }

    /// Idempotent of the level-r inflation of a depth-zero character: value
    /// |T(k_r)|⁻¹ times the character of the inverse point, at every point.
    pub fn e_chi(&self, chi: &DepthZeroChar) -> Result<TorusAlgElem> {
        if chi.p() != self.p {
            return Err(Error::Unsupported(format!(
                "character lives at p = {}, algebra at p = {}",
                chi.p(),
                self.p
            )));
        }
        if chi.d() != self.d {
            return Err(Error::RankMismatch(chi.d(), self.d));
        }
        let inv = self.inv_order();
        let mut out = self.zero();
        for_each_tuple(self.modulus, self.d, &mut |logs| {
            let neg: Vec<u64> = logs.iter().map(|&a| (self.modulus - a) % self.modulus).collect();
            let val = chi.value_r(&neg).expect("rank checked").mul(&inv);
            if !val.is_zero() {
                out.coeffs.insert(logs.to_vec(), val);
            }
        });
        Ok(out)
    }

    /// Sum of the idempotents of all norm-inflated characters: the averaged
    /// indicator of the norm-one subgroup. At r = 1 this is the identity.
    pub fn pullback_sum_target(&self) -> TorusAlgElem {
        let base = self.p - 1;
        let kernel_coord = self.modulus / base;
        let order = BigInt::from(kernel_coord).pow(self.d as u32);
        let c = Scalar::from_rat(self.scalar_modulus(), Rat::new(BigInt::one(), order));
        let mut out = self.zero();
        for_each_tuple(kernel_coord, self.d, &mut |t| {
            let key: Vec<u64> = t.iter().map(|&a| a * base).collect();
            out.coeffs.insert(key, c.clone());
        });
        out
    }

    /// Central idempotent of a full Weyl orbit of characters: the sum of
    /// `e_chi` over the distinct conjugates.
    pub fn e_orbit(&self, chi: &DepthZeroChar) -> Result<TorusAlgElem> {
        let mut orbit: BTreeSet<DepthZeroChar> = BTreeSet::new();
        for w in all_perms(self.d) {
            orbit.insert(chi.conjugate(&w)?);
        }
        let mut out = self.zero();
        for c in &orbit {
            out = self.add(&out, &self.e_chi(c)?)?;
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Change of basis into the Levi Iwahori-Hecke algebra.

/// An element of the character-typed Hecke algebra, written in its
/// distinguished double-coset basis. Supports only group elements whose
/// finite part preserves the stabilizer blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiHeckeElem {
    m: u32,
    coeffs: BTreeMap<ExtAffElem, Scalar>,
}

impl ChiHeckeElem {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtAffElem, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, w: &ExtAffElem) -> Scalar {
        self.coeffs.get(w).cloned().unwrap_or_else(|| Scalar::zero(self.m))
    }
}

/// The character-typed Hecke algebra. Its basis is indexed by the extended
/// affine Weyl group of the stabilizer Levi; its ring structure is defined
/// by the length-corrected change of basis into the Levi Iwahori-Hecke
/// algebra, under which the basis element at w corresponds to
/// v^{ℓ(w)−ℓ_M(w)} times the standard basis element at w.
pub struct ChiHeckeAlgebra {
    chi: DepthZeroChar,
    stab: CharStabilizer,
    full: WeylCtx,
    levi_alg: Algebra,
}

impl ChiHeckeAlgebra {
    pub fn new(chi: &DepthZeroChar) -> Result<Self> {
        let stab = stabilizer(chi)?;
        let full = WeylCtx::gl(chi.d());
        let levi_alg = Algebra::new(stab.levi().ctx(), chi.scalar_modulus());
        Ok(ChiHeckeAlgebra {
            chi: chi.clone(),
            stab,
            full,
            levi_alg,
        })
    }

    pub fn chi(&self) -> &DepthZeroChar {
        &self.chi
    }

    pub fn stab(&self) -> &CharStabilizer {
        &self.stab
    }

    /// The Iwahori-Hecke algebra of the stabilizer Levi (the target of the
    /// change of basis).
    pub fn levi_algebra(&self) -> &Algebra {
        &self.levi_alg
    }

    pub fn m(&self) -> u32 {
        self.levi_alg.m()
    }

    pub fn zero(&self) -> ChiHeckeElem {
        ChiHeckeElem {
            m: self.m(),
            coeffs: BTreeMap::new(),
        }
    }

    /// Length in the full group minus length in the Levi; the exponent of
    /// the change-of-basis factor at w.
    pub fn length_drop(&self, w: &ExtAffElem) -> Result<i64> {
        if !self.levi_alg.ctx().is_member(w) {
            return Err(Error::NotInLevi);
        }
        Ok(self.full.length(w) as i64 - self.levi_alg.ctx().length(w) as i64)
    }

    /// Build an element from basis coefficients; support must lie in the
    /// Levi's extended affine Weyl group.
    pub fn elem(&self, coeffs: BTreeMap<ExtAffElem, Scalar>) -> Result<ChiHeckeElem> {
        let mut out = self.zero();
        for (w, c) in coeffs {
            if !self.levi_alg.ctx().is_member(&w) {
                return Err(Error::NotInLevi);
            }
            if c.m() != self.m() {
                return Err(Error::ContextMismatch(c.m(), self.m()));
            }
            if !c.is_zero() {
                out.coeffs.insert(w, c);
            }
        }
        Ok(out)
    }

    pub fn basis(&self, w: &ExtAffElem) -> Result<ChiHeckeElem> {
        self.elem(BTreeMap::from([(w.clone(), Scalar::one(self.m()))]))
    }

    /// Change of basis into the Levi Iwahori-Hecke algebra.
    pub fn transport(&self, h: &ChiHeckeElem) -> Result<HeckeElem> {
        let mut out = self.levi_alg.zero();
        for (w, c) in &h.coeffs {
            let drop = self.length_drop(w)?;
            let factor = Scalar::v_pow(self.m(), drop);
            out = out.add(&self.levi_alg.t_basis(w).scale(&c.mul(&factor)));
        }
        Ok(out)
    }

    /// Inverse change of basis.
    pub fn transport_back(&self, x: &HeckeElem) -> Result<ChiHeckeElem> {
        if x.m() != self.m() {
            return Err(Error::ContextMismatch(x.m(), self.m()));
        }
        let mut coeffs = BTreeMap::new();
        for (w, c) in x.terms() {
            let drop = self.length_drop(w)?;
            let factor = Scalar::v_pow(self.m(), -drop);
            coeffs.insert(w.clone(), c.mul(&factor));
        }
        self.elem(coeffs)
    }

    /// Multiplication, defined through the change of basis.
    pub fn mul(&self, a: &ChiHeckeElem, b: &ChiHeckeElem) -> Result<ChiHeckeElem> {
        let prod = self.levi_alg.mul(&self.transport(a)?, &self.transport(b)?);
        self.transport_back(&prod)
    }

    pub fn add(&self, a: &ChiHeckeElem, b: &ChiHeckeElem) -> ChiHeckeElem {
        let mut out = a.clone();
        for (w, c) in &b.coeffs {
            let cur = out.coeffs.remove(w).unwrap_or_else(|| Scalar::zero(self.m()));
            let s = cur.add(c);
            if !s.is_zero() {
                out.coeffs.insert(w.clone(), s);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::adm_set;
    use crate::scalar::rat;

    #[test]
    fn character_basics() {
        assert!(DepthZeroChar::new(4, &[0]).is_err());
        let chi = DepthZeroChar::new(5, &[-1, 9, 0]).unwrap();
        assert_eq!(chi.exps(), &[3, 1, 0]);
        assert_eq!(chi.modulus(), 4);
        // value at logs (1,0,2): ζ₄^{3·1+1·0+0·2} = ζ₄³
        let v = chi.value(&[1, 0, 2]).unwrap();
        assert_eq!(v, Scalar::zeta_pow(4, 3));
        // level-2 logs reduce mod 4: (5, 7, 23) ↦ (1, 3, 3)
        let vr = chi.value_r(&[5, 7, 23]).unwrap();
        assert_eq!(vr, Scalar::zeta_pow(4, (3 + 3) % 4));
    }

    #[test]
    fn conjugate_is_inverse_readthrough() {
        let chi = DepthZeroChar::new(7, &[0, 2, 5]).unwrap();
        let w = Perm::from_cycle(3, &[0, 1, 2]); // 1→2→3→1
        let cw = chi.conjugate(&w).unwrap();
        // position w(i) of the conjugate reads position i
        for i in 0..3 {
            assert_eq!(cw.exps()[w.apply(i)], chi.exps()[i]);
        }
        // double conjugation composes
        let u = Perm::transposition(3, 0, 2);
        let a = chi.conjugate(&w).unwrap().conjugate(&u).unwrap();
        let b = chi.conjugate(&u.compose(&w)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stabilizer_examples() {
        let triv = DepthZeroChar::trivial(3, 3).unwrap();
        let st = stabilizer(&triv).unwrap();
        assert_eq!(st.levi().blocks, vec![vec![1, 2, 3]]);
        assert_eq!(st.w_chi().len(), 6);
        assert_eq!(st.trivial_block(), &[1, 2, 3]);
        assert_eq!(st.mu1(), Some([1, 0, 0].as_slice()));
        assert_eq!(st.mu1_dual(), Some(vec![0, 0, -1]));

        let chi = DepthZeroChar::new(3, &[0, 0, 1]).unwrap();
        let st = stabilizer(&chi).unwrap();
        assert_eq!(st.levi().blocks, vec![vec![1, 2], vec![3]]);
        assert_eq!(st.w_chi().len(), 2);
        assert_eq!(st.trivial_block(), &[1, 2]);
        assert_eq!(st.mu1(), Some([1, 0, 0].as_slice()));
        assert_eq!(st.mu1_dual(), Some(vec![0, -1, 0]));

        let chi = DepthZeroChar::new(3, &[1, 1]).unwrap();
        let st = stabilizer(&chi).unwrap();
        assert!(st.trivial_block().is_empty());
        assert!(st.mu1().is_none());
        assert!(st.mu1_dual().is_none());
        assert_eq!(st.w_chi().len(), 2);

        // non-contiguous level sets
        let chi = DepthZeroChar::new(5, &[2, 0, 2]).unwrap();
        let st = stabilizer(&chi).unwrap();
        assert_eq!(st.levi().blocks, vec![vec![1, 3], vec![2]]);
        assert_eq!(st.trivial_block(), &[2]);
        assert_eq!(st.mu1(), Some([0, 1, 0].as_slice()));
    }

    #[test]
    fn stabilizer_is_reflection_subgroup_everywhere() {
        // The constructor cross-checks the generated subgroup against the
        // full fixing subgroup at every call in this rank range.
        for p in [3u64, 5, 7] {
            for d in 1..=4usize {
                let m = p - 1;
                let mut count = 0usize;
                for_each_tuple(m, d, &mut |exps| {
                    let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
                    let chi = DepthZeroChar::new(p, &signed).unwrap();
                    let st = stabilizer(&chi).unwrap();
                    let expected: usize = st
                        .levi()
                        .blocks
                        .iter()
                        .map(|b| (1..=b.len()).product::<usize>())
                        .product();
                    assert_eq!(st.w_chi().len(), expected);
                    count += 1;
                });
                assert_eq!(count as u64, m.pow(d as u32));
            }
        }
    }

    #[test]
    fn selector_examples() {
        let ctx = WeylCtx::gl(3);
        let chi = DepthZeroChar::new(3, &[0, 0, 1]).unwrap();
        // S(w) = {1,2}: the two-cycle element of the subset
        let w12 = crate::admissible::cycle_element(3, &[1, 2]).unwrap();
        assert_eq!(critical_indices(&ctx, &w12).unwrap().indices(), &[1, 2]);
        assert!(delta1(&w12, &chi).unwrap());
        assert!(delta(&w12, &chi).unwrap());
        // S(w) = {3}
        let w3 = ExtAffElem::basis_translation(3, 3);
        assert!(!delta1(&w3, &chi).unwrap());
        assert!(delta(&w3, &chi).unwrap());
        // mixed critical set {2,3}: neither constant nor trivial
        let w23 = crate::admissible::cycle_element(3, &[2, 3]).unwrap();
        assert!(!delta(&w23, &chi).unwrap());
        assert!(!delta1(&w23, &chi).unwrap());

        let chi = DepthZeroChar::new(3, &[1, 1]).unwrap();
        let tau = crate::weyl::tau_gl(2);
        assert!(delta(&tau, &chi).unwrap());
        assert!(!delta1(&tau, &chi).unwrap());

        let triv = DepthZeroChar::trivial(3, 2).unwrap();
        for w in adm_set(&WeylCtx::gl(2)) {
            assert!(delta(&w, &triv).unwrap());
            assert!(delta1(&w, &triv).unwrap());
        }

        // non-admissible input is rejected
        let bad = ExtAffElem::translation(vec![2, -1]);
        assert!(matches!(delta(&bad, &triv), Err(Error::NotAdmissible)));
    }

    #[test]
    fn selector_sweep_exercises_all_routes() {
        for p in [3u64, 5] {
            for d in 1..=3usize {
                let ctx = WeylCtx::gl(d);
                let adm = adm_set(&ctx);
                for_each_tuple(p - 1, d, &mut |exps| {
                    let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
                    let chi = DepthZeroChar::new(p, &signed).unwrap();
                    for w in &adm {
                        let d1 = delta1(w, &chi).unwrap();
                        let dl = delta(w, &chi).unwrap();
                        if d1 {
                            assert!(dl, "refined selector must imply the coarse one");
                        }
                    }
                });
            }
        }
    }

    #[test]
    fn idempotent_spot_values() {
        let alg = TorusGroupAlgebra::new(3, 1, 1).unwrap();
        let sign = DepthZeroChar::new(3, &[1]).unwrap();
        let e = alg.e_chi(&sign).unwrap();
        assert_eq!(e.coeff(&[0]).unwrap(), &Scalar::from_rat(2, rat(1, 2)));
        // ζ₂ = −1: value at the generator is −1/2
        assert_eq!(e.coeff(&[1]).unwrap(), &Scalar::from_rat(2, rat(-1, 2)));
        let ee = alg.convolve(&e, &e).unwrap();
        assert_eq!(ee, e);
    }

    #[test]
    fn idempotents_complete_and_orthogonal_r1() {
        for p in [3u64, 5] {
            for d in 1..=2usize {
                let alg = TorusGroupAlgebra::new(p, 1, d).unwrap();
                let m = p - 1;
                let mut idems = Vec::new();
                for_each_tuple(m, d, &mut |exps| {
                    let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
                    idems.push(alg.e_chi(&DepthZeroChar::new(p, &signed).unwrap()).unwrap());
                });
                let mut total = alg.zero();
                for e in &idems {
                    total = alg.add(&total, e).unwrap();
                }
                assert_eq!(total, alg.identity());
                assert_eq!(total, alg.pullback_sum_target());
                for (i, a) in idems.iter().enumerate() {
                    for (j, b) in idems.iter().enumerate() {
                        let prod = alg.convolve(a, b).unwrap();
                        if i == j {
                            assert_eq!(&prod, a);
                        } else {
                            assert!(prod.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn idempotents_complete_on_pullbacks_r2() {
        let alg = TorusGroupAlgebra::new(3, 2, 2).unwrap();
        let mut total = alg.zero();
        for_each_tuple(2, 2, &mut |exps| {
            let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
            let e = alg.e_chi(&DepthZeroChar::new(3, &signed).unwrap()).unwrap();
            let ee = alg.convolve(&e, &e).unwrap();
            assert_eq!(ee, e);
            total = alg.add(&total, &e).unwrap();
        });
        // the sum is the averaged indicator of the norm-one subgroup
        assert_eq!(total, alg.pullback_sum_target());
        let t2 = alg.convolve(&total, &total).unwrap();
        assert_eq!(t2, total);
    }

    #[test]
    fn conjugation_commutes_with_idempotents() {
        for p in [3u64, 5] {
            for d in 1..=3usize {
                let alg = TorusGroupAlgebra::new(p, 1, d).unwrap();
                let ctx = WeylCtx::gl(d);
                let chis: Vec<DepthZeroChar> = {
                    let mut v = Vec::new();
                    for_each_tuple(p - 1, d, &mut |exps| {
                        let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
                        v.push(DepthZeroChar::new(p, &signed).unwrap());
                    });
                    v
                };
                for w in adm_set(&ctx) {
                    for chi in &chis {
                        let lhs = alg.conj_by_perm(&alg.e_chi(chi).unwrap(), w.perm()).unwrap();
                        let rhs = alg.e_chi(&chi.conjugate(w.perm()).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_idempotent_is_conjugation_invariant() {
        let alg = TorusGroupAlgebra::new(5, 1, 3).unwrap();
        let chi = DepthZeroChar::new(5, &[0, 1, 1]).unwrap();
        let e = alg.e_orbit(&chi).unwrap();
        for w in all_perms(3) {
            assert_eq!(alg.conj_by_perm(&e, &w).unwrap(), e);
        }
        let ee = alg.convolve(&e, &e).unwrap();
        assert_eq!(ee, e);
    }

    #[test]
    fn transport_trivial_character_is_identity() {
        let chi = DepthZeroChar::trivial(3, 3).unwrap();
        let alg = ChiHeckeAlgebra::new(&chi).unwrap();
        let tau = crate::weyl::tau_gl(3);
        for w in [ExtAffElem::basis_translation(3, 2), tau] {
            assert_eq!(alg.length_drop(&w).unwrap(), 0);
            let h = alg.basis(&w).unwrap();
            let img = alg.transport(&h).unwrap();
            assert_eq!(img, alg.levi_algebra().t_basis(&w));
            let back = alg.transport_back(&img).unwrap();
            assert_eq!(back, h);
        }
    }

    #[test]
    fn transport_scales_levi_length_zero_elements() {
        // blocks {1,2} ⊔ {3}: the block rotation of {1,2} has Levi length 0
        let chi = DepthZeroChar::new(3, &[0, 0, 1]).unwrap();
        let alg = ChiHeckeAlgebra::new(&chi).unwrap();
        let om = alg.levi_algebra().ctx().block_tau(0);
        assert_eq!(alg.levi_algebra().ctx().length(&om), 0);
        let full_len = WeylCtx::gl(3).length(&om) as i64;
        assert!(full_len > 0);
        assert_eq!(alg.length_drop(&om).unwrap(), full_len);
        let img = alg.transport(&alg.basis(&om).unwrap()).unwrap();
        assert_eq!(
            img.coeff(&om),
            Scalar::v_pow(alg.m(), full_len)
        );

        // support outside the Levi group is rejected
        let w13 = ExtAffElem::from_perm(Perm::transposition(3, 0, 2));
        assert!(matches!(alg.basis(&w13), Err(Error::NotInLevi)));
    }

    #[test]
    fn chi_multiplication_via_transport() {
        let chi = DepthZeroChar::new(3, &[0, 0, 1]).unwrap();
        let alg = ChiHeckeAlgebra::new(&chi).unwrap();
        let id = ExtAffElem::identity(3);
        let one = alg.basis(&id).unwrap();
        let s = alg.levi_algebra().ctx().simple_reflection(1).clone();
        let ts = alg.basis(&s).unwrap();
        assert_eq!(alg.mul(&one, &ts).unwrap(), ts);
        assert_eq!(alg.mul(&ts, &one).unwrap(), ts);
        // quadratic relation survives the change of basis
        let sq = alg.mul(&ts, &ts).unwrap();
        let m = alg.m();
        let q = Scalar::q_pow(m, 1);
        let expected = alg.add(
            &alg.elem(BTreeMap::from([(s.clone(), q.sub(&Scalar::one(m)))])).unwrap(),
            &alg.elem(BTreeMap::from([(id.clone(), q.clone())])).unwrap(),
        );
        assert_eq!(sq, expected);
        // round trip on a mixed element
        let mixed = alg.add(&one, &alg.basis(&alg.levi_algebra().ctx().block_tau(0)).unwrap());
        let back = alg.transport_back(&alg.transport(&mixed).unwrap()).unwrap();
        assert_eq!(back, mixed);
    }

    #[test]
    fn length_drop_constant_on_inverse_admissible_support() {
        // On the admissible elements selected by the refined selector, the
        // length drop equals d minus the trivial-block size.
        for d in 1..=4usize {
            let ctx = WeylCtx::gl(d);
            let adm = adm_set(&ctx);
            for p in [3u64, 5] {
                for_each_tuple(p - 1, d, &mut |exps| {
                    let signed: Vec<i64> = exps.iter().map(|&e| e as i64).collect();
                    let chi = DepthZeroChar::new(p, &signed).unwrap();
                    let st = stabilizer(&chi).unwrap();
                    if st.trivial_block().is_empty() {
                        return;
                    }
                    let alg = ChiHeckeAlgebra::new(&chi).unwrap();
                    let b = st.trivial_block().len() as i64;
                    for w in &adm {
                        if !delta1(w, &chi).unwrap() {
                            continue;
                        }
                        let wi = w.inverse();
                        assert_eq!(alg.length_drop(&wi).unwrap(), d as i64 - b);
                        assert_eq!(alg.length_drop(w).unwrap(), d as i64 - b);
                    }
                });
            }
        }
    }
}
