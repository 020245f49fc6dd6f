//! The admissible set of the minuscule coweight (1,0^{d−1}) in GL_d:
//! enumeration by three independent routes, critical indices S(w), block
//! (Levi) restrictions, the lattices L_w, and the stratification poset with
//! its alternating-sum numerology.
//!
//! Adm(μ₀) is the downward Bruhat closure of {t_{e_1},…,t_{e_d}}. Its 2^d − 1
//! elements are indexed by nonempty subsets S ⊆ {1,…,d}: the element of index
//! S = {m₁ < ⋯ < m_k} is w_S = t_{e_{m_k}}·(m_k m_{k−1} ⋯ m₁).

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::weyl::{BaseAlcove, ExtAffElem, WeylCtx};

/// Nonempty set of critical indices, 1-indexed, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalSet {
    d: usize,
    indices: Vec<usize>,
}

impl CriticalSet {
    pub fn new(d: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::NotAdmissible);
        }
        if indices[0] < 1 || *indices.last().unwrap() > d {
            return Err(Error::BadBlocks(format!(
                "critical indices {indices:?} not inside 1..={d}"
            )));
        }
        Ok(CriticalSet { d, indices })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn is_subset_of(&self, other: &[usize]) -> bool {
        self.indices.iter().all(|j| other.contains(j))
    }
}

/// w_S = t_{e_{max S}}·(max → next → ⋯ → min → max) for nonempty S.
pub fn cycle_element(d: usize, s: &[usize]) -> Result<ExtAffElem> {
    let cs = CriticalSet::new(d, s.to_vec())?;
    let m = *cs.indices().last().unwrap();
    let mut lambda = vec![0i64; d];
    lambda[m - 1] = 1;
    let cycle: Vec<usize> = cs.indices().iter().rev().map(|&j| j - 1).collect();
    let perm = if cycle.len() == 1 {
        Perm::identity(d)
    } else {
        Perm::from_cycle(d, &cycle)
    };
    ExtAffElem::new(lambda, perm)
}

/// Constant-time admissibility test by the permissibility inequalities:
/// λ = e_m for some m, and λ(j) = 0 ⇒ w̄⁻¹(j) ≥ j, λ(j) = 1 ⇒ w̄⁻¹(j) ≤ j.
pub fn is_admissible(w: &ExtAffElem) -> bool {
    let d = w.d();
    let lambda = w.lambda();
    if lambda.iter().any(|&x| x != 0 && x != 1) || lambda.iter().sum::<i64>() != 1 {
        return false;
    }
    let pinv = w.perm().inverse();
    (0..d).all(|j0| {
        let pre = pinv.apply(j0);
        if lambda[j0] == 0 {
            pre >= j0
        } else {
            pre <= j0
        }
    })
}

fn sorted_by_key(ctx: &WeylCtx, mut v: Vec<ExtAffElem>) -> Vec<ExtAffElem> {
    v.sort_by_key(|w| ctx.sort_key(w));
    v.dedup();
    v
}

/// Adm(μ₀) by downward Bruhat closure of the translations t_{e_j}.
pub fn adm_set(ctx: &WeylCtx) -> Vec<ExtAffElem> {
    assert!(ctx.is_full(), "the admissible set is a one-block notion");
    let d = ctx.d();
    let mut out = Vec::new();
    for j in 1..=d {
        out.extend(ctx.bruhat_interval_below(&ExtAffElem::basis_translation(d, j)));
    }
    sorted_by_key(ctx, out)
}

/// Adm(μ₀) by the permissibility inequalities over all (m, w̄) pairs.
pub fn perm_set(ctx: &WeylCtx) -> Vec<ExtAffElem> {
    assert!(ctx.is_full());
    let d = ctx.d();
    let mut out = Vec::new();
    let mut one_line: Vec<u32> = (1..=d as u32).collect();
    loop {
        let perm = Perm::from_one_line_1indexed(&one_line).unwrap();
        for m in 1..=d {
            let mut lambda = vec![0i64; d];
            lambda[m - 1] = 1;
            let w = ExtAffElem::new(lambda, perm.clone()).unwrap();
            if is_admissible(&w) {
                out.push(w);
            }
        }
        if !next_permutation(&mut one_line) {
            break;
        }
    }
    sorted_by_key(ctx, out)
}

/// Adm(μ₀) by the subset-to-cycle classification.
pub fn adm_set_cycles(ctx: &WeylCtx) -> Vec<ExtAffElem> {
    assert!(ctx.is_full());
    let d = ctx.d();
    assert!(d <= 24, "subset enumeration is exponential in d");
    let mut out = Vec::new();
    for mask in 1u32..(1 << d) {
        let s: Vec<usize> = (1..=d).filter(|j| mask & (1 << (j - 1)) != 0).collect();
        out.push(cycle_element(d, &s).unwrap());
    }
    sorted_by_key(ctx, out)
}

fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn s_via_bruhat(ctx: &WeylCtx, w: &ExtAffElem) -> Vec<usize> {
    let d = ctx.d();
    (1..=d)
        .filter(|&j| ctx.bruhat_leq(w, &ExtAffElem::basis_translation(d, j)))
        .collect()
}

fn s_via_vertices(w: &ExtAffElem) -> Vec<usize> {
    // j is critical iff λ + w̄(ω̄_j) = ω̄_{j−1}, reading ω̄_d = −(1,…,1).
    let d = w.d();
    let base = BaseAlcove::new(d);
    let omega_bar = |i: usize| -> Vec<i64> {
        if i < d {
            base.vertices[i].clone()
        } else {
            vec![-1; d]
        }
    };
    (1..=d)
        .filter(|&j| {
            let moved = w.perm().act(&omega_bar(j));
            let shifted: Vec<i64> = moved
                .iter()
                .zip(w.lambda().iter())
                .map(|(a, l)| a + l)
                .collect();
            shifted == omega_bar(j - 1)
        })
        .collect()
}

fn s_via_cycle(w: &ExtAffElem) -> Result<Vec<usize>> {
    if !is_admissible(w) {
        return Err(Error::NotAdmissible);
    }
    let m = w
        .lambda()
        .iter()
        .position(|&x| x == 1)
        .expect("admissible elements translate by some e_m")
        + 1;
    let s: Vec<usize> = if w.perm().is_identity() {
        vec![m]
    } else {
        let cycles = w.perm().cycles();
        if cycles.len() != 1 {
            return Err(Error::NotAdmissible);
        }
        cycles[0].iter().map(|&j| j + 1).collect()
    };
    // The shape is forced: w must be the canonical element of its index set.
    if cycle_element(w.d(), &s)? != *w {
        return Err(Error::NotAdmissible);
    }
    let mut s = s;
    s.sort_unstable();
    Ok(s)
}

/// S(w) computed three independent ways, with agreement enforced.
pub fn critical_indices(ctx: &WeylCtx, w: &ExtAffElem) -> Result<CriticalSet> {
    assert!(ctx.is_full());
    if !is_admissible(w) {
        return Err(Error::NotAdmissible);
    }
    let by_cycle = s_via_cycle(w)?;
    let by_bruhat = s_via_bruhat(ctx, w);
    let by_vertex = s_via_vertices(w);
    assert_eq!(by_cycle, by_bruhat, "critical-index routes disagree: {w:?}");
    assert_eq!(by_cycle, by_vertex, "critical-index routes disagree: {w:?}");
    CriticalSet::new(ctx.d(), by_cycle)
}

/// Codimension of the stratum of w: ℓ(t_{μ₀}) − ℓ(w), asserted = |S(w)| − 1.
pub fn codim(ctx: &WeylCtx, w: &ExtAffElem) -> Result<usize> {
    let s = critical_indices(ctx, w)?;
    let c = (ctx.d() - 1) - ctx.length(w);
    assert_eq!(c, s.len() - 1, "codim formula violated at {w:?}");
    Ok(c)
}

/// The two sides of the order reversal: (y ≤ x in Bruhat, S(x) ⊆ S(y)).
pub fn bruhat_vs_s(ctx: &WeylCtx, x: &ExtAffElem, y: &ExtAffElem) -> Result<(bool, bool)> {
    let sx = critical_indices(ctx, x)?;
    let sy = critical_indices(ctx, y)?;
    Ok((ctx.bruhat_leq(y, x), sx.is_subset_of(sy.indices())))
}

/// Block partition of {1,…,d}; the ambient rank-d context plus the block
/// structure. Blocks are 1-indexed.
#[derive(Clone, Debug)]
pub struct LeviDatum {
    pub d: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl LeviDatum {
    pub fn new(d: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        // Validation is delegated to the context constructor.
        WeylCtx::levi(d, &blocks)?;
        Ok(LeviDatum { d, blocks })
    }

    pub fn full(d: usize) -> Self {
        LeviDatum {
            d,
            blocks: vec![(1..=d).collect()],
        }
    }

    pub fn ctx(&self) -> WeylCtx {
        WeylCtx::levi(self.d, &self.blocks).expect("validated at construction")
    }

    /// Index of the block containing the 1-indexed position j.
    pub fn block_of(&self, j: usize) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| b.contains(&j))
            .ok_or(Error::NotOrbitVector)
    }

    /// The dominant representative of the block orbit: 1 at the smallest
    /// position of the block (coweights decrease along block positions).
    pub fn dominant_rep(&self, block_idx: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.d];
        let j = *self.blocks[block_idx].iter().min().unwrap();
        v[j - 1] = 1;
        v
    }
}

/// Position j with ν = e_j, or an error for anything outside the orbit of μ₀.
pub fn orbit_position(nu: &[i64]) -> Result<usize> {
    let ones = nu.iter().filter(|&&x| x == 1).count();
    if ones != 1 || nu.iter().any(|&x| x != 0 && x != 1) {
        return Err(Error::NotOrbitVector);
    }
    Ok(nu.iter().position(|&x| x == 1).unwrap() + 1)
}

/// {w ∈ Adm(μ₀) : S(w) ⊆ block of ν}, computed on the big group, and
/// independently as the ν-admissible set of the block subgroup (downward
/// closure of {t_{e_j} : j in the block} under the blockwise Bruhat order).
/// The two computations are asserted equal.
pub fn levi_adm(levi: &LeviDatum, nu: &[i64]) -> Result<Vec<ExtAffElem>> {
    if nu.len() != levi.d {
        return Err(Error::RankMismatch(nu.len(), levi.d));
    }
    let j = orbit_position(nu)?;
    let block = levi.blocks[levi.block_of(j)?].clone();
    let gctx = WeylCtx::gl(levi.d);
    let via_g: Vec<ExtAffElem> = adm_set(&gctx)
        .into_iter()
        .filter(|w| {
            critical_indices(&gctx, w)
                .map(|s| s.is_subset_of(&block))
                .unwrap_or(false)
        })
        .collect();

    let mctx = levi.ctx();
    let mut via_m = Vec::new();
    for &bj in &block {
        via_m.extend(mctx.bruhat_interval_below(&ExtAffElem::basis_translation(levi.d, bj)));
    }
    let via_m = sorted_by_key(&gctx, via_m);
    let via_g = sorted_by_key(&gctx, via_g);
    assert_eq!(
        via_g, via_m,
        "block-restricted admissible set disagrees with the blockwise one"
    );
    Ok(via_g)
}

// ---------------------------------------------------------------------------
// Integer lattices: Hermite and Smith normal forms, hand-rolled.

/// Column-style Hermite normal form of the column span of `gens` (each
/// generator is a length-d column). Returns a basis of the span: nonzero
/// columns, pivots strictly descending in row index... pivots are the first
/// nonzero entries, made positive, entries to the right of a pivot reduced.
pub fn hermite_basis(d: usize, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut cols: Vec<Vec<i64>> = gens.to_vec();
    for c in &cols {
        assert_eq!(c.len(), d);
    }
    let n = cols.len();
    let mut row = 0usize;
    let mut lead = 0usize; // first unfixed column
    while row < d && lead < n {
        // Euclidean elimination across columns lead..n at this row.
        loop {
            let mut best: Option<usize> = None;
            for c in lead..n {
                if cols[c][row] != 0 {
                    best = match best {
                        None => Some(c),
                        Some(b) if cols[c][row].abs() < cols[b][row].abs() => Some(c),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else { break };
            cols.swap(lead, b);
            let mut done = true;
            for c in lead + 1..n {
                let q = cols[c][row].div_euclid(cols[lead][row]);
                if q != 0 {
                    for r in 0..d {
                        cols[c][r] -= q * cols[lead][r];
                    }
                }
                if cols[c][row] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols[lead][row] != 0 {
            if cols[lead][row] < 0 {
                for r in 0..d {
                    cols[lead][r] = -cols[lead][r];
                }
            }
            // Reduce earlier pivot columns against this one.
            let p = cols[lead][row];
            for c in 0..lead {
                let q = cols[c][row].div_euclid(p);
                if q != 0 {
                    for r in 0..d {
                        cols[c][r] -= q * cols[lead][r];
                    }
                }
            }
            lead += 1;
        }
        row += 1;
    }
    cols.truncate(lead);
    cols
}

/// Invariant factors (Smith normal form diagonal, nonzero part) of the
/// matrix with the given columns.
pub fn smith_invariants(d: usize, gens: &[Vec<i64>]) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = gens.iter().map(|c| c.clone()).collect();
    for c in &m {
        assert_eq!(c.len(), d);
    }
    let n = m.len();
    let mut out = Vec::new();
    let mut top = 0usize; // rows 0..top and columns 0..out.len() are finished
    while top < d && out.len() < n {
        let ci = out.len();
        // Find any nonzero entry in the remaining block.
        let mut pivot = None;
        'scan: for c in ci..n {
            for r in top..d {
                if m[c][r] != 0 {
                    pivot = Some((c, r));
                    break 'scan;
                }
            }
        }
        let Some((pc, pr)) = pivot else { break };
        m.swap(ci, pc);
        m[ci].swap(top, pr);
        for c in ci + 1..n {
            m[c].swap(top, pr);
        }
        // Alternate row/column elimination until the cross is clear.
        loop {
            let mut dirty = false;
            for c in ci + 1..n {
                let q = m[c][top].div_euclid(m[ci][top]);
                if q != 0 {
                    for r in top..d {
                        m[c][r] -= q * m[ci][r];
                    }
                }
                if m[c][top] != 0 {
                    m.swap(ci, c);
                    dirty = true;
                }
            }
            for r in top + 1..d {
                let q = m[ci][r].div_euclid(m[ci][top]);
                if q != 0 {
                    for c in ci..n {
                        let t = q * m[c][top];
                        m[c][r] -= t;
                    }
                }
                if m[ci][r] != 0 {
                    for c in ci..n {
                        m[c].swap(top, r);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        out.push(m[ci][top].abs());
        top += 1;
    }
    // Enforce divisibility d₁ | d₂ | ⋯ by gcd-fixups.
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let g = gcd(out[i], out[j]);
            let l = out[i] / g * out[j];
            out[i] = g;
            out[j] = l;
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Saturated sublattice of ℤ^d presented by a Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocharLattice {
    pub d: usize,
    pub basis: Vec<Vec<i64>>,
}

/// L_w: the group generated by {w(ν) − ν : ν ∈ ℤ^d} for the affine action
/// w(ν) = e_m + w̄(ν), i.e. by e_m together with w̄(e_j) − e_j for all j.
/// Asserts L_w = ⊕_{j∈S(w)} ℤe_j, with all Smith invariants 1 (torsion-free
/// quotient).
pub fn lattice_lw(ctx: &WeylCtx, w: &ExtAffElem) -> Result<CocharLattice> {
    let s = critical_indices(ctx, w)?;
    let d = ctx.d();
    let mut gens: Vec<Vec<i64>> = vec![w.lambda().to_vec()];
    for j in 0..d {
        let mut e = vec![0i64; d];
        e[j] = 1;
        let mut g = w.perm().act(&e);
        g[j] -= 1;
        gens.push(g);
    }
    let basis = hermite_basis(d, &gens);
    let expect: Vec<Vec<i64>> = s
        .indices()
        .iter()
        .map(|&j| {
            let mut e = vec![0i64; d];
            e[j - 1] = 1;
            e
        })
        .collect();
    assert_eq!(basis, expect, "L_w must be the coordinate lattice on S(w)");
    let inv = smith_invariants(d, &gens);
    assert!(
        inv.iter().all(|&x| x == 1),
        "quotient by L_w must be torsion-free"
    );
    Ok(CocharLattice { d, basis })
}

// ---------------------------------------------------------------------------
// Stratification.

/// One stratum: indexed by a nonempty S ⊆ {1,…,d}, carrying its element w_S
/// and codimension |S| − 1.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub s: Vec<usize>,
    pub w: ExtAffElem,
    pub codim: usize,
}

/// Closure poset of the strata: S′ lies in the closure of S iff S ⊆ S′.
/// `covers` lists the pairs (index of S, index of S ∪ {x}).
#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub d: usize,
    pub strata: Vec<Stratum>,
    pub covers: Vec<(usize, usize)>,
}

pub fn strata_poset(d: usize) -> StrataPoset {
    assert!(d >= 1 && d <= 24);
    let mut strata = Vec::new();
    let mut index_of = std::collections::HashMap::new();
    for mask in 1u32..(1 << d) {
        let s: Vec<usize> = (1..=d).filter(|j| mask & (1 << (j - 1)) != 0).collect();
        index_of.insert(mask, strata.len());
        strata.push(Stratum {
            w: cycle_element(d, &s).unwrap(),
            codim: s.len() - 1,
            s,
        });
    }
    let mut covers = Vec::new();
    for mask in 1u32..(1 << d) {
        for bit in 0..d {
            if mask & (1 << bit) == 0 {
                covers.push((index_of[&mask], index_of[&(mask | (1 << bit))]));
            }
        }
    }
    StrataPoset { d, strata, covers }
}

/// Cohomological numerology of a stratum: in degree i the rank is
/// C(|S|−1, i), and the full alternating trace Σ_i (−1)^i C(|S|−1,i) q^i
/// collapses to (1−q)^{|S|−1}. Returns (rank in degree i, alternating trace).
pub fn nearby_cycle_numerology(s: &CriticalSet, i: usize, q: &Scalar) -> Result<(u64, Scalar)> {
    let n = s.len() - 1;
    let rank = binomial(n as u64, i as u64);
    let mut trace = Scalar::zero(q.m());
    let mut qpow = Scalar::one(q.m());
    for k in 0..=n {
        let c = Scalar::from_int(q.m(), binomial(n as u64, k as u64) as i64);
        let signed = if k % 2 == 0 { c } else { c.neg() };
        trace = trace.add(&signed.mul(&qpow));
        qpow = qpow.mul(q);
    }
    let closed = Scalar::one(q.m()).sub(q).pow(n as i64)?;
    assert_eq!(trace, closed, "alternating binomial sum must telescope");
    Ok((rank, trace))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
