//! The Iwahori-Hecke algebra of an extended affine Weyl group over
//! ℚ(ζ_m)[v,v⁻¹], q = v²: multiplication in the T_w basis, the normalized
//! basis T̃_w = v^{−ℓ(w)}T_w, Bernstein elements Θ^C_λ by dominant difference
//! and by alcove walks, the central elements z_μ and k_μ = v^{⟨2ρ,μ⟩}z_μ,
//! centrality testing, expansion of central elements into symmetric Laurent
//! polynomials, evaluation, and base change.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::scalar::Scalar;
use crate::weyl::{ExtAffElem, WeylCtx};

/// Finitely supported combination Σ c_w T_w.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElem {
    m: u32,
    coeffs: BTreeMap<ExtAffElem, Scalar>,
}

impl HeckeElem {
    pub fn zero(m: u32) -> Self {
        HeckeElem {
            m,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExtAffElem> {
        self.coeffs.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtAffElem, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, w: &ExtAffElem) -> Scalar {
        self.coeffs.get(w).cloned().unwrap_or_else(|| Scalar::zero(self.m))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn insert_add(&mut self, w: ExtAffElem, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&w) {
            None => {
                self.coeffs.insert(w, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.coeffs.insert(w, s);
                }
            }
        }
    }

    pub fn add(&self, other: &HeckeElem) -> HeckeElem {
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.insert_add(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeckeElem) -> HeckeElem {
        self.add(&other.scale(&Scalar::from_int(other.m, -1)))
    }

    pub fn scale(&self, c: &Scalar) -> HeckeElem {
        let mut out = HeckeElem::zero(self.m);
        if c.is_zero() {
            return out;
        }
        for (w, a) in &self.coeffs {
            out.insert_add(w.clone(), a.mul(c));
        }
        out
    }
}

impl std::fmt::Debug for HeckeElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*T[{w:?}]")?;
        }
        Ok(())
    }
}

/// The algebra: a Weyl context plus the cyclotomic conductor of the scalar
/// ring. All operations are exact.
#[derive(Clone, Debug)]
pub struct Algebra {
    ctx: WeylCtx,
    m: u32,
}

impl Algebra {
    pub fn new(ctx: WeylCtx, m: u32) -> Self {
        Algebra { ctx, m }
    }

    pub fn gl(d: usize) -> Self {
        Algebra::new(WeylCtx::gl(d), 1)
    }

    pub fn ctx(&self) -> &WeylCtx {
        &self.ctx
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> usize {
        self.ctx.d()
    }

    pub fn zero(&self) -> HeckeElem {
        HeckeElem::zero(self.m)
    }

    pub fn one(&self) -> HeckeElem {
        self.t_basis(&ExtAffElem::identity(self.d()))
    }

    pub fn t_basis(&self, w: &ExtAffElem) -> HeckeElem {
        assert!(self.ctx.is_member(w), "element outside the group: {w:?}");
        let mut e = HeckeElem::zero(self.m);
        e.insert_add(w.clone(), Scalar::one(self.m));
        e
    }

    /// T̃_w = v^{−ℓ(w)} T_w.
    pub fn t_tilde(&self, w: &ExtAffElem) -> HeckeElem {
        let l = self.ctx.length(w) as i64;
        self.t_basis(w).scale(&Scalar::v_pow(self.m, -l))
    }

    /// Right multiplication by T_s for the k-th wall.
    fn mul_gen_right(&self, x: &HeckeElem, k: usize) -> HeckeElem {
        let s = self.ctx.simple_reflection(k).clone();
        let q = Scalar::q_pow(self.m, 1);
        let qm1 = q.sub(&Scalar::one(self.m));
        let mut out = HeckeElem::zero(self.m);
        for (h, c) in &x.coeffs {
            let hs = h.mul(&s);
            if self.ctx.length(&hs) > self.ctx.length(h) {
                out.insert_add(hs, c.clone());
            } else {
                out.insert_add(h.clone(), c.mul(&qm1));
                out.insert_add(hs, c.mul(&q));
            }
        }
        out
    }

    fn mul_omega_right(&self, x: &HeckeElem, omega: &ExtAffElem) -> HeckeElem {
        let mut out = HeckeElem::zero(self.m);
        for (h, c) in &x.coeffs {
            out.insert_add(h.mul(omega), c.clone());
        }
        out
    }

    /// T_a·T_b via a reduced word of b: lengths add along the word, so the
    /// Iwahori-Matsumoto relations apply one generator at a time.
    pub fn mul(&self, a: &HeckeElem, b: &HeckeElem) -> HeckeElem {
        let mut out = HeckeElem::zero(self.m);
        for (w, c) in &b.coeffs {
            let (word, omega) = self.ctx.reduced_word(w);
            let mut acc = a.scale(c);
            for k in word {
                acc = self.mul_gen_right(&acc, k);
            }
            acc = self.mul_omega_right(&acc, &omega);
            out = out.add(&acc);
        }
        out
    }

    /// T̃_w⁻¹ via T̃_s⁻¹ = T̃_s + (v⁻¹ − v) and T_ω⁻¹ = T_{ω⁻¹}.
    pub fn t_tilde_inv(&self, w: &ExtAffElem) -> HeckeElem {
        let (word, omega) = self.ctx.reduced_word(w);
        let q_s = Scalar::v_pow(self.m, -1).sub(&Scalar::v_pow(self.m, 1));
        let mut acc = self.t_basis(&omega.inverse());
        for &k in word.iter().rev() {
            let s = self.ctx.simple_reflection(k);
            let factor = self.t_tilde(s).add(&self.one().scale(&q_s));
            acc = self.mul(&acc, &factor);
        }
        acc
    }

    // -- chambers ----------------------------------------------------------

    /// λ is C-dominant for the chamber C = w̄_C·C₀ (C₀ the chamber of the
    /// base alcove, where in-block coordinates increase) iff
    /// λ_{w̄_C(j)} ≥ λ_{w̄_C(i)} for in-block i < j.
    pub fn is_chamber_dominant(&self, lambda: &[i64], chamber: &Perm) -> bool {
        self.ctx.blocks0().iter().all(|block| {
            block.windows(2).all(|w| {
                let (i, j) = (w[0], w[1]);
                lambda[chamber.apply(j)] >= lambda[chamber.apply(i)]
            })
        })
    }

    /// Strictly C-interior integral point: the image under w̄_C of the vector
    /// taking value t at the t-th position of each block.
    fn chamber_regular_point(&self, chamber: &Perm) -> Vec<i64> {
        let mut v0 = vec![0i64; self.d()];
        for block in self.ctx.blocks0() {
            for (t, &j) in block.iter().enumerate() {
                v0[j] = (t + 1) as i64;
            }
        }
        chamber.act(&v0)
    }

    /// Θ^C_λ = T̃_{t_{λ₁}}·T̃_{t_{λ₂}}⁻¹ for λ = λ₁ − λ₂ with λ₁, λ₂ both
    /// C-dominant. Computed for two decompositions and asserted equal: the
    /// minimal repair of λ, and its shift by a small nonconstant C-dominant
    /// vector. Minimality keeps the inverted translation short; the naive
    /// regular-point shift makes rank 5 intractable.
    pub fn theta(&self, lambda: &[i64], chamber: &Perm) -> HeckeElem {
        assert_eq!(lambda.len(), self.d());
        assert_eq!(chamber.d(), self.d());
        let lam2 = self.minimal_repair(lambda, chamber);
        let a = self.theta_from_pair(lambda, &lam2, chamber);
        let shift = self.small_dominant_shift(chamber);
        let lam2b: Vec<i64> = lam2.iter().zip(&shift).map(|(x, y)| x + y).collect();
        let b = self.theta_from_pair(lambda, &lam2b, chamber);
        assert_eq!(a, b, "theta must not depend on the dominant decomposition");
        a
    }

    /// Componentwise smallest λ₂ ≥ 0 with λ₂ and λ + λ₂ both C-dominant:
    /// along each block in chamber order, accumulate the descents of λ.
    fn minimal_repair(&self, lambda: &[i64], chamber: &Perm) -> Vec<i64> {
        let mut lam2 = vec![0i64; self.d()];
        for block in self.ctx.blocks0() {
            let mut c = 0i64;
            let mut prev: Option<i64> = None;
            for &j in block {
                let pos = chamber.apply(j);
                if let Some(p) = prev {
                    c += (p - lambda[pos]).max(0);
                }
                lam2[pos] = c;
                prev = Some(lambda[pos]);
            }
        }
        lam2
    }

    /// A short C-dominant vector that is nonconstant on every block of size
    /// at least 2: zero at the first chamber position, one elsewhere.
    fn small_dominant_shift(&self, chamber: &Perm) -> Vec<i64> {
        let mut shift = vec![0i64; self.d()];
        for block in self.ctx.blocks0() {
            for (t, &j) in block.iter().enumerate() {
                shift[chamber.apply(j)] = if t == 0 { 0 } else { 1 };
            }
        }
        shift
    }

    fn theta_from_pair(&self, lambda: &[i64], lam2: &[i64], chamber: &Perm) -> HeckeElem {
        let lam1: Vec<i64> = lambda.iter().zip(lam2).map(|(a, b)| a + b).collect();
        debug_assert!(self.is_chamber_dominant(&lam1, chamber));
        debug_assert!(self.is_chamber_dominant(lam2, chamber));
        let t1 = self.t_tilde(&ExtAffElem::translation(lam1));
        let t2 = self.t_tilde_inv(&ExtAffElem::translation(lam2.to_vec()));
        self.mul(&t1, &t2)
    }

    /// Θ^C_λ by an alcove walk along `expr` (wall indices, not necessarily
    /// reduced), with signs oriented toward the chamber opposite to C: the
    /// ν-th crossing gets ε_ν = +1 iff the affine root of the crossed wall,
    /// transported by the walk prefix, increases toward −C.
    pub fn theta_walk(&self, lambda: &[i64], chamber: &Perm, expr: &[usize]) -> Result<HeckeElem> {
        assert_eq!(lambda.len(), self.d());
        let t_lambda = ExtAffElem::translation(lambda.to_vec());
        let mut prod = ExtAffElem::identity(self.d());
        for &k in expr {
            if k >= self.ctx.walls().len() {
                return Err(Error::WordMismatch);
            }
            prod = prod.mul(self.ctx.simple_reflection(k));
        }
        let omega = prod.inverse().mul(&t_lambda);
        if self.ctx.length(&omega) != 0 {
            return Err(Error::WordMismatch);
        }
        // Deep point of −C.
        let p: Vec<i64> = self
            .chamber_regular_point(chamber)
            .iter()
            .map(|x| -x)
            .collect();
        let q_s = Scalar::v_pow(self.m, -1).sub(&Scalar::v_pow(self.m, 1));
        let mut acc = self.one();
        let mut prefix = ExtAffElem::identity(self.d());
        for &k in expr {
            let s = self.ctx.simple_reflection(k);
            let grad = self.wall_gradient(k);
            let moved = prefix.perm().act(&grad);
            let pairing: i64 = moved.iter().zip(&p).map(|(a, b)| a * b).sum();
            assert_ne!(pairing, 0, "deep point must be regular for every crossing");
            let factor = if pairing > 0 {
                self.t_tilde(s)
            } else {
                self.t_tilde(s).add(&self.one().scale(&q_s))
            };
            acc = self.mul(&acc, &factor);
            prefix = prefix.mul(s);
        }
        Ok(self.mul_omega_right(&acc, &omega))
    }

    /// Gradient of the affine root of the k-th wall, normalized positive on
    /// the base alcove.
    fn wall_gradient(&self, k: usize) -> Vec<i64> {
        self.ctx.walls()[k].gradient(self.d())
    }

    // -- central elements ---------------------------------------------------

    /// Orbit of λ under the block permutation group, as a sorted dedup list.
    pub fn block_orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut orbit = std::collections::BTreeSet::new();
        let mut queue = vec![lambda.to_vec()];
        orbit.insert(lambda.to_vec());
        while let Some(v) = queue.pop() {
            for block in self.ctx.blocks0() {
                for w in block.windows(2) {
                    let mut u = v.clone();
                    u.swap(w[0], w[1]);
                    if orbit.insert(u.clone()) {
                        queue.push(u);
                    }
                }
            }
        }
        orbit.into_iter().collect()
    }

    /// μ is dominant iff weakly decreasing along each block; minuscule iff
    /// within every block max − min ≤ 1.
    pub fn check_dominant_minuscule(&self, mu: &[i64]) -> Result<()> {
        if mu.len() != self.d() {
            return Err(Error::RankMismatch(mu.len(), self.d()));
        }
        for block in self.ctx.blocks0() {
            for w in block.windows(2) {
                if mu[w[0]] < mu[w[1]] {
                    return Err(Error::NotDominant(mu.to_vec()));
                }
            }
            let vals: Vec<i64> = block.iter().map(|&j| mu[j]).collect();
            let (mx, mn) = (vals.iter().max().unwrap(), vals.iter().min().unwrap());
            if mx - mn > 1 {
                return Err(Error::Unsupported(format!(
                    "coweight {mu:?} is not minuscule on block {block:?}"
                )));
            }
        }
        Ok(())
    }

    /// z_μ = Σ_{λ ∈ W'μ} Θ_λ, for dominant minuscule μ. Chamber-independent;
    /// computed in the chamber of the base alcove.
    pub fn z_mu(&self, mu: &[i64]) -> Result<HeckeElem> {
        self.z_mu_chamber(mu, &Perm::identity(self.d()))
    }

    pub fn z_mu_chamber(&self, mu: &[i64], chamber: &Perm) -> Result<HeckeElem> {
        self.check_dominant_minuscule(mu)?;
        let mut z = self.zero();
        for lam in self.block_orbit(mu) {
            z = z.add(&self.theta(&lam, chamber));
        }
        Ok(z)
    }

    /// ⟨2ρ, μ⟩ for the blockwise half-sum of positive roots:
    /// the t-th position of a size-b block pairs to b + 1 − 2t.
    pub fn two_rho_pairing(&self, mu: &[i64]) -> i64 {
        let mut acc = 0i64;
        for block in self.ctx.blocks0() {
            let b = block.len() as i64;
            for (t, &j) in block.iter().enumerate() {
                acc += mu[j] * (b - 2 * (t as i64 + 1) + 1);
            }
        }
        acc
    }

    /// k_μ = v^{⟨2ρ,μ⟩} z_μ.
    pub fn k_mu(&self, mu: &[i64]) -> Result<HeckeElem> {
        let z = self.z_mu(mu)?;
        Ok(z.scale(&Scalar::v_pow(self.m, self.two_rho_pairing(mu))))
    }

    /// Commutation with every generator T_s and every length-zero block
    /// rotation.
    pub fn is_central(&self, h: &HeckeElem) -> bool {
        for k in 0..self.ctx.walls().len() {
            let s = self.t_basis(self.ctx.simple_reflection(k));
            if self.mul(&s, h) != self.mul(h, &s) {
                return false;
            }
        }
        for b in 0..self.ctx.num_blocks() {
            let t = self.t_basis(&self.ctx.block_tau(b));
            if self.mul(&t, h) != self.mul(h, &t) {
                return false;
            }
        }
        true
    }

    /// Expand a central element as Σ_λ c_λ Θ_λ and return Σ c_λ x^λ.
    /// Unitriangularity is enforced at runtime: at every step the longest
    /// surviving support elements must be translations, each handled by
    /// subtracting a multiple of its Θ; anything else is an error.
    pub fn bernstein_coeffs(&self, z: &HeckeElem) -> Result<SymLaurent> {
        let chamber = Perm::identity(self.d());
        let mut rem = z.clone();
        let mut coeffs: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
        let mut steps = 0usize;
        while !rem.is_zero() {
            steps += 1;
            if steps > 100_000 {
                return Err(Error::ExpansionFailed(
                    "expansion did not terminate within the support box".into(),
                ));
            }
            let max_len = rem
                .support()
                .map(|w| self.ctx.length(w))
                .max()
                .expect("nonzero element has support");
            let top: Vec<ExtAffElem> = rem
                .support()
                .filter(|w| self.ctx.length(w) == max_len)
                .cloned()
                .collect();
            let Some(t) = top.iter().find(|w| w.is_translation()) else {
                return Err(Error::ExpansionFailed(format!(
                    "length-{max_len} layer contains no translation; element is not in \
                     the span of the Θ_λ"
                )));
            };
            let lam = t.lambda().to_vec();
            let th = self.theta(&lam, &chamber);
            let lead = th.coeff(t);
            let c = rem.coeff(t).mul(&lead.invert().map_err(|_| {
                Error::ExpansionFailed("leading theta coefficient is not a unit".into())
            })?);
            rem = rem.sub(&th.scale(&c));
            if coeffs.insert(lam, c).is_some() {
                return Err(Error::ExpansionFailed("same exponent visited twice".into()));
            }
        }
        SymLaurent::new(self.d(), self.m, self.block_generators(), coeffs)
    }

    /// Adjacent in-block transpositions: generators of the block permutation
    /// group.
    pub fn block_generators(&self) -> Vec<Perm> {
        let mut gens = Vec::new();
        for block in self.ctx.blocks0() {
            for w in block.windows(2) {
                gens.push(Perm::transposition(self.d(), w[0], w[1]));
            }
        }
        gens
    }
}

// ---------------------------------------------------------------------------

/// Laurent polynomial in x₁,…,x_d with Scalar coefficients, invariant under
/// the group generated by the declared permutations (checked on
/// construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymLaurent {
    d: usize,
    m: u32,
    group: Vec<Perm>,
    coeffs: BTreeMap<Vec<i64>, Scalar>,
}

impl SymLaurent {
    pub fn new(
        d: usize,
        m: u32,
        group: Vec<Perm>,
        coeffs: BTreeMap<Vec<i64>, Scalar>,
    ) -> Result<Self> {
        let coeffs: BTreeMap<Vec<i64>, Scalar> =
            coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (lam, c) in &coeffs {
            if lam.len() != d {
                return Err(Error::RankMismatch(lam.len(), d));
            }
            for g in &group {
                let moved = g.act(lam);
                if coeffs.get(&moved) != Some(c) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(SymLaurent {
            d,
            m,
            group,
            coeffs,
        })
    }

    /// Orbit sum m_μ = Σ_{λ ∈ orbit of μ} x^λ.
    pub fn orbit_sum(d: usize, m: u32, group: Vec<Perm>, mu: &[i64]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for lam in orbit_of(group.as_slice(), mu) {
            coeffs.insert(lam, Scalar::one(m));
        }
        SymLaurent::new(d, m, group, coeffs)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Substitute x_j ↦ η_j. Requires invertible scalars when negative
    /// exponents occur.
    pub fn eval(&self, eta: &[Scalar]) -> Result<Scalar> {
        if eta.len() != self.d {
            return Err(Error::RankMismatch(eta.len(), self.d));
        }
        let mut acc = Scalar::zero(self.m);
        for (lam, c) in &self.coeffs {
            let mut term = c.clone();
            for (j, &e) in lam.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if e > 0 {
                    eta[j].clone()
                } else {
                    eta[j].invert()?
                };
                for _ in 0..e.abs() {
                    term = term.mul(&base);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Send each orbit sum m_μ to m_{rμ}: exponents scale by r.
    pub fn base_change(&self, r: u32) -> Result<SymLaurent> {
        if r == 0 {
            return Err(Error::Unsupported("base change needs r ≥ 1".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (lam, c) in &self.coeffs {
            let scaled: Vec<i64> = lam.iter().map(|x| x * r as i64).collect();
            coeffs.insert(scaled, c.clone());
        }
        SymLaurent::new(self.d, self.m, self.group.clone(), coeffs)
    }

    /// Apply v ↦ v^r to every coefficient.
    pub fn subst_v_pow(&self, r: i64) -> SymLaurent {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(lam, c)| (lam.clone(), c.subst_v_pow(r)))
            .collect();
        SymLaurent {
            d: self.d,
            m: self.m,
            group: self.group.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &SymLaurent) -> Result<SymLaurent> {
        let mut coeffs = self.coeffs.clone();
        for (lam, c) in &other.coeffs {
            let e = coeffs.remove(lam).map(|x| x.add(c)).unwrap_or_else(|| c.clone());
            if !e.is_zero() {
                coeffs.insert(lam.clone(), e);
            }
        }
        SymLaurent::new(self.d, self.m, self.group.clone(), coeffs)
    }

    pub fn mul(&self, other: &SymLaurent) -> Result<SymLaurent> {
        let mut coeffs: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let prod = ca.mul(cb);
                match coeffs.remove(&s) {
                    None => {
                        coeffs.insert(s, prod);
                    }
                    Some(old) => {
                        let t = old.add(&prod);
                        if !t.is_zero() {
                            coeffs.insert(s, t);
                        }
                    }
                }
            }
        }
        SymLaurent::new(self.d, self.m, self.group.clone(), coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> SymLaurent {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|_| !c.is_zero())
            .map(|(lam, a)| (lam.clone(), a.mul(c)))
            .collect();
        SymLaurent {
            d: self.d,
            m: self.m,
            group: self.group.clone(),
            coeffs,
        }
    }
}

pub fn orbit_of(gens: &[Perm], start: &[i64]) -> Vec<Vec<i64>> {
    let mut orbit = std::collections::BTreeSet::new();
    let mut queue = vec![start.to_vec()];
    orbit.insert(start.to_vec());
    while let Some(v) = queue.pop() {
        for g in gens {
            let u = g.act(&v);
            if orbit.insert(u.clone()) {
                queue.push(u);
            }
        }
    }
    orbit.into_iter().collect()
}
