//! Representations of `K = ker χ` under the action of `Γ = G/K`, and their
//! extensions to `G_χ` (or to `G` itself) when `Γ` is cyclic.
//!
//! An [`Ambient`] is a group `H` with a normal subgroup `K` and cyclic
//! quotient of order `n`, together with a fixed generator `a` of the quotient
//! and its least-index lift `g`. Every element is written `h = g^i · k`
//! with `0 ≤ i < n` and `k ∈ K`, and an extension is determined by a matrix
//! `T` with `T ρ(k) T⁻¹ = ρ(g k g⁻¹)` and `Tⁿ = ρ(gⁿ)`:
//! `ρ̃(g^i · k) = T^i ρ(k)`.
//!
//! In the twisted ambient `H = G_χ`, conjugation is `Int^χ_g`, so
//! invariance there is the equivariance condition
//! `ρ ∘ Int_g ≅ ρ ∘ a(χ(g))` read in `G`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{quotient, CyclicAction, FiniteGroup, QuotientData, Subgroup};
use crate::linalg::{block_diag, fro, identity, inverse, principal_root, rel_diff, root_of_unity, to_nested, Mat, C64};
use crate::par;
use crate::rep::{
    canonical_cmp, decompose, direct_sum_all, equivalent, intertwiners, irreducible, irreps, restrict, same_group,
    witness_residual, MatrixRep, NumConfig,
};
use crate::twisted::TwistedGroup;

/// `H ⊃ K` with cyclic `H/K`, a chosen generator and its lift.
#[derive(Clone, Debug)]
pub struct Ambient {
    group: Arc<FiniteGroup>,
    kernel: Subgroup,
    quotient: QuotientData,
    generator: usize,
    lift: usize,
    n: usize,
    log: Vec<usize>,
    lift_powers: Vec<usize>,
}

impl Ambient {
    /// `K` normal in its parent with cyclic quotient.
    pub fn plain(kernel: &Subgroup) -> Result<Self> {
        let group = kernel.parent().clone();
        let q = quotient(&group, kernel)?;
        let gamma = q.gamma().clone();
        let n = gamma.order();
        let generator = (0..n).find(|&x| gamma.element_order(x) == n).ok_or(Error::NotCyclic)?;
        let mut log = vec![0; n];
        let mut x = gamma.identity();
        for a in 0..n {
            log[x] = a;
            x = gamma.mul(generator, x);
        }
        let lift = q.lift(generator);
        let lift_powers = (0..=n).map(|a| group.pow(lift, a as i64)).collect();
        Ok(Ambient { group, kernel: kernel.clone(), quotient: q, generator, lift, n, log, lift_powers })
    }

    /// `H = G_χ`, `K = ker χ`.
    pub fn twisted(t: &TwistedGroup) -> Result<Self> {
        Self::plain(t.kernel_twisted())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    /// `|Γ|`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn lift(&self) -> usize {
        self.lift
    }

    /// `gⁿ`, an element of `K` (parent index).
    pub fn lift_power_n(&self) -> usize {
        self.lift_powers[self.n]
    }

    /// `(i, k)` with `h = g^i · k`, `k` as a local index of `K`.
    pub fn split(&self, h: usize) -> (usize, usize) {
        let i = self.log[self.quotient.project(h)];
        let k = self.group.mul(self.group.inv(self.lift_powers[i]), h);
        (i, self.kernel.local_index(k).expect("g^-i h lies in K"))
    }

    /// Discrete logarithm of a quotient element in base `generator`.
    pub fn log(&self, gamma: usize) -> usize {
        self.log[gamma]
    }

    /// `ρ ∘ Int_x` restricted to `K`, for any `x` in `H`.
    pub fn inner(&self, rho: &MatrixRep, x: usize) -> Result<MatrixRep> {
        gamma_inner_with_lift(rho, &self.kernel, x)
    }

    /// `ρ ∘ Int_{g^i}`.
    pub fn inner_power(&self, rho: &MatrixRep, i: usize) -> Result<MatrixRep> {
        self.inner(rho, self.group.pow(self.lift, i as i64))
    }

    fn check_rep(&self, rho: &MatrixRep) -> Result<()> {
        if same_group(rho.group(), self.kernel.group()) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `ρ̃(g^i · k) = T^i ρ(k)`. Images on `K` are copied from `ρ`.
    pub fn extension_from(&self, rho: &MatrixRep, t: &Mat, cfg: &NumConfig) -> Result<(MatrixRep, f64)> {
        self.check_rep(rho)?;
        let mut powers = vec![identity(rho.dim())];
        for i in 1..self.n {
            let next = &powers[i - 1] * t;
            powers.push(next);
        }
        let images = par::map(cfg.exec, self.group.order(), |h| {
            let (i, k) = self.split(h);
            if i == 0 {
                rho.image(k).clone()
            } else {
                &powers[i] * rho.image(k)
            }
        });
        let rep = MatrixRep::assemble(self.group.clone(), images, cfg.tol);
        let (residual, worst) = rep.homomorphism_residual(cfg.exec);
        if residual > cfg.tol {
            let (a, b) = worst.unwrap_or((0, 0));
            return Err(Error::Homomorphism(a, b, residual));
        }
        Ok((rep, residual))
    }

    /// Invariance of `ρ` under every `Int_{g_γ}`, lifts least-index.
    pub fn invariance(&self, rho: &MatrixRep, cfg: &NumConfig) -> Result<EquivarianceReport> {
        self.check_rep(rho)?;
        let gamma = self.quotient.gamma();
        let verdicts = (0..gamma.order())
            .map(|c| {
                let lift = self.quotient.lift(c);
                let moved = self.inner(rho, lift)?;
                verdict(c, lift, 0, rho, &moved, cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivarianceReport::from_verdicts(verdicts, self.generator))
    }
}

/// `ρ ∘ Int_x |_K` for `x` in `k.parent()`: `k ↦ ρ(x k x⁻¹)`.
pub fn gamma_inner_with_lift(rho: &MatrixRep, k: &Subgroup, x: usize) -> Result<MatrixRep> {
    if !same_group(rho.group(), k.group()) {
        return Err(Error::GroupMismatch);
    }
    let perm = k.conjugation(x).ok_or_else(|| Error::NotNormal("conjugation leaves K".into()))?;
    Ok(rho.compose_automorphism(&perm))
}

/// `ρ ∘ Int_{g_γ}` with the least-index lift of `γ`.
pub fn gamma_inner(rho: &MatrixRep, k: &Subgroup, q: &QuotientData, gamma: usize) -> Result<MatrixRep> {
    gamma_inner_with_lift(rho, k, q.lift(gamma))
}

/// `ρ ∘ a(e)|_K` for `λ = e^(2πie/n)`.
pub fn gamma_twist(rho: &MatrixRep, k: &Subgroup, act: &CyclicAction, exponent: i64) -> Result<MatrixRep> {
    if !same_group(rho.group(), k.group()) {
        return Err(Error::GroupMismatch);
    }
    let aut = act.aut(exponent);
    let perm = k
        .members()
        .iter()
        .map(|&m| k.local_index(aut[m]))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotInvariant(format!("auts[{exponent}] does not preserve K")))?;
    Ok(rho.compose_automorphism(&perm))
}

/// Per-`γ` outcome of an equivalence test between two actions on `ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct GammaVerdict {
    pub gamma: usize,
    pub lift: usize,
    pub exponent: u32,
    pub equivalent: bool,
    pub residual: f64,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<Mat>,
}

fn serialize_witness<S: serde::Serializer>(m: &Option<Mat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref().map(to_nested).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub verdicts: Vec<GammaVerdict>,
    /// The generator of `Γ` used for the single-element check.
    pub generator: usize,
    pub generator_holds: bool,
    pub holds: bool,
}

impl EquivarianceReport {
    fn from_verdicts(verdicts: Vec<GammaVerdict>, generator: usize) -> Self {
        let holds = verdicts.iter().all(|v| v.equivalent);
        let generator_holds = verdicts.iter().find(|v| v.gamma == generator).is_some_and(|v| v.equivalent);
        EquivarianceReport { verdicts, generator, generator_holds, holds }
    }

    pub fn max_residual(&self) -> f64 {
        self.verdicts.iter().filter(|v| v.equivalent).map(|v| v.residual).fold(0.0, f64::max)
    }
}

/// Witness `T` with `T a(k) T⁻¹ = b(k)`, with its residual.
fn verdict(gamma: usize, lift: usize, exponent: u32, a: &MatrixRep, b: &MatrixRep, cfg: &NumConfig) -> Result<GammaVerdict> {
    let witness = equivalent(a, b, cfg)?;
    let residual = witness.as_ref().map_or(f64::INFINITY, |t| witness_residual(a, b, t));
    Ok(GammaVerdict { gamma, lift, exponent, equivalent: witness.is_some(), residual, witness })
}

/// Everything needed to move between `K`-representations and
/// `G_χ`-representations.
#[derive(Clone, Debug)]
pub struct TwistContext {
    twisted: TwistedGroup,
    base_quotient: QuotientData,
    ambient: Ambient,
}

impl TwistContext {
    pub fn new(twisted: TwistedGroup) -> Result<Self> {
        let base_quotient = quotient(twisted.base(), twisted.kernel_base())?;
        let ambient = Ambient::twisted(&twisted)?;
        Ok(TwistContext { twisted, base_quotient, ambient })
    }

    pub fn twisted(&self) -> &TwistedGroup {
        &self.twisted
    }

    pub fn base_quotient(&self) -> &QuotientData {
        &self.base_quotient
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn kernel(&self) -> &Subgroup {
        self.twisted.kernel_base()
    }

    /// `χ(g_γ)` as an exponent.
    pub fn exponent(&self, gamma: usize) -> u32 {
        self.twisted.chi().exponent(self.base_quotient.lift(gamma))
    }

    pub fn gamma_inner(&self, rho: &MatrixRep, gamma: usize) -> Result<MatrixRep> {
        gamma_inner(rho, self.kernel(), &self.base_quotient, gamma)
    }

    pub fn gamma_twist(&self, rho: &MatrixRep, gamma: usize) -> Result<MatrixRep> {
        gamma_twist(rho, self.kernel(), self.twisted.action(), self.exponent(gamma) as i64)
    }

    /// For every `γ ∈ Γ`: `ρ ∘ Int_{g_γ} ≅ ρ ∘ a(χ(g_γ))` in `G`.
    pub fn satisfies_equivariance(&self, rho: &MatrixRep, cfg: &NumConfig) -> Result<EquivarianceReport> {
        let verdicts = (0..self.base_quotient.gamma().order())
            .map(|c| {
                let twist = self.gamma_twist(rho, c)?;
                let inner = self.gamma_inner(rho, c)?;
                verdict(c, self.base_quotient.lift(c), self.exponent(c), &twist, &inner, cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EquivarianceReport::from_verdicts(verdicts, self.base_generator()))
    }

    /// The coset of the twisted ambient's generator, as an element of `G/K`.
    /// Both quotients number cosets by least element, so the index agrees.
    fn base_generator(&self) -> usize {
        self.ambient.generator
    }

    /// Canonical extension of an equivariant `K`-representation to `G_χ`
    /// (root 0 in every orbit).
    pub fn to_gchi_rep(&self, rho: &MatrixRep, cfg: &NumConfig) -> Result<ExtensionResult> {
        let report = self.satisfies_equivariance(rho, cfg)?;
        if !report.holds {
            let bad = report.verdicts.iter().find(|v| !v.equivalent).map_or(0, |v| v.gamma);
            return Err(Error::NotInvariant(format!("equivariance fails at γ = {bad}")));
        }
        extend_semisimple(rho, &self.ambient, cfg)?.canonical(cfg)
    }

    /// Restriction to `K` plus the equivariance report with witnesses
    /// `T_γ = ρ̃(g_γ)`, which satisfy `T_γ ρ(a(χ(g_γ)) k) T_γ⁻¹ = ρ(g_γ k g_γ⁻¹)`.
    pub fn from_gchi_rep(&self, rep: &MatrixRep, cfg: &NumConfig) -> Result<(MatrixRep, EquivarianceReport)> {
        if !same_group(rep.group(), self.twisted.group()) {
            return Err(Error::GroupMismatch);
        }
        let rho = restrict(rep, self.twisted.kernel_twisted())?;
        let verdicts = (0..self.base_quotient.gamma().order())
            .map(|c| {
                let twist = self.gamma_twist(&rho, c)?;
                let inner = self.gamma_inner(&rho, c)?;
                let lift = self.base_quotient.lift(c);
                let t = rep.image(lift).clone();
                let residual = witness_residual(&twist, &inner, &t);
                Ok(GammaVerdict {
                    gamma: c,
                    lift,
                    exponent: self.exponent(c),
                    equivalent: residual <= cfg.tol,
                    residual,
                    witness: Some(t),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((rho, EquivarianceReport::from_verdicts(verdicts, self.base_generator())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Irreducible,
    OrbitBlock,
    SemisimpleSum,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExtensionResiduals {
    pub homomorphism: f64,
    /// `‖Tⁿ − ρ(gⁿ)‖`, relative.
    pub power: f64,
    /// `max_k ‖ρ̃(k) − ρ(k)‖`; zero by construction.
    pub restriction: f64,
    /// Distance of `ρ(gⁿ)⁻¹ Tⁿ` (per block) from a scalar.
    pub schur: f64,
    /// Spread of `Tr ρᵢ(gⁿ)` and of the block scalars `λᵢ`.
    pub traces: f64,
}

#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub rep: MatrixRep,
    pub restricted: MatrixRep,
    /// The scaled `T`, with `Tⁿ = ρ(gⁿ)`.
    pub t: Mat,
    pub lift: usize,
    pub n: usize,
    /// Irreducible branch: `ρ(g⁻ⁿ) Tⁿ = λ I`. Block branch: `ρᵢ(gⁿ) = λ Bᵢ^p`.
    pub lambda: C64,
    pub block_lambdas: Vec<C64>,
    pub mu: C64,
    pub root: usize,
    pub branch: Branch,
    pub residuals: ExtensionResiduals,
}

impl ExtensionResult {
    /// The same construction with `μ` multiplied by `ω_n^(root − self.root)`.
    /// The result differs from `self` by the character `g^i k ↦ ω_n^(i·Δ)` of `Γ`.
    pub fn with_root(&self, amb: &Ambient, root: usize, cfg: &NumConfig) -> Result<ExtensionResult> {
        let delta = root as i64 - self.root as i64;
        let z = root_of_unity(delta, self.n as u32);
        let t = &self.t * z;
        let (rep, hom) = amb.extension_from(&self.restricted, &t, cfg)?;
        let mut out = self.clone();
        out.residuals.homomorphism = hom;
        out.residuals.power = power_residual(&t, &self.restricted, amb);
        out.rep = rep;
        out.t = t;
        out.mu = self.mu * z;
        out.root = root % self.n;
        Ok(out)
    }

    /// Every root choice `0..n`.
    pub fn all_roots(&self, amb: &Ambient, cfg: &NumConfig) -> Result<Vec<ExtensionResult>> {
        (0..self.n).map(|r| if r == self.root { Ok(self.clone()) } else { self.with_root(amb, r, cfg) }).collect()
    }
}

fn power_residual(t: &Mat, rho: &MatrixRep, amb: &Ambient) -> f64 {
    let gn = amb.kernel.local_index(amb.lift_power_n()).expect("gⁿ ∈ K");
    rel_diff(&crate::linalg::pow(t, amb.n), rho.image(gn))
}

/// `μ` with `μⁿ = z`, principal root times `ω_n^root`.
fn nth_root(z: C64, n: usize, root: usize) -> C64 {
    principal_root(z, n as u32) * root_of_unity(root as i64, n as u32)
}

fn normalized(t: Mat) -> Mat {
    let d = t.nrows() as f64;
    let s = d.sqrt() / fro(&t);
    t * C64::new(s, 0.0)
}

/// Schur scalar of `m`: `(tr m / d, ‖m − λI‖ / max(1, ‖λI‖))`.
fn schur_scalar(m: &Mat) -> (C64, f64) {
    let d = m.nrows();
    let lambda = m.trace() / d as f64;
    (lambda, rel_diff(m, &(identity(d) * lambda)))
}

/// Extension of an irreducible `ρ` with `ρ ∘ Int_g ≅ ρ`.
pub fn extend_irreducible(rho: &MatrixRep, amb: &Ambient, root: usize, cfg: &NumConfig) -> Result<ExtensionResult> {
    amb.check_rep(rho)?;
    let moved = amb.inner(rho, amb.lift)?;
    let t = equivalent(rho, &moved, cfg)?
        .ok_or_else(|| Error::NoIntertwiner("ρ and ρ∘Int_g are inequivalent".into()))?;
    let gn = amb.kernel.local_index(amb.lift_power_n()).expect("gⁿ ∈ K");
    let rho_gn_inv = inverse(rho.image(gn)).ok_or_else(|| Error::Dimension("ρ(gⁿ) is singular".into()))?;
    let s = &rho_gn_inv * crate::linalg::pow(&t, amb.n);
    let (lambda, schur) = schur_scalar(&s);
    if schur > cfg.tol {
        return Err(Error::NotScalar(schur));
    }
    // (μT)ⁿ = μⁿ λ ρ(gⁿ), so μⁿ = λ⁻¹.
    let mu = nth_root(lambda.inv(), amb.n, root);
    let t = t * mu;
    let (rep, homomorphism) = amb.extension_from(rho, &t, cfg)?;
    let power = power_residual(&t, rho, amb);
    Ok(ExtensionResult {
        rep,
        restricted: rho.clone(),
        t,
        lift: amb.lift,
        n: amb.n,
        lambda,
        block_lambdas: vec![lambda],
        mu,
        root: root % amb.n,
        branch: Branch::Irreducible,
        residuals: ExtensionResiduals { homomorphism, power, restriction: 0.0, schur, traces: 0.0 },
    })
}

/// Extension of `ρ₀ ⊕ … ⊕ ρ_{m−1}` with `ρᵢ ≅ ρ₀ ∘ Int_{gⁱ}` pairwise
/// inequivalent irreducibles and `ρ₀ ∘ Int_{g^m} ≅ ρ₀`.
///
/// `T` has blocks `Aᵢ : V_{i+1} → Vᵢ` above the diagonal and the corner
/// `A_{m−1} : V₀ → V_{m−1}`, with `Aᵢ ρ_{i+1}(k) Aᵢ⁻¹ = ρᵢ(g k g⁻¹)`. Then
/// `T^m` is block diagonal with cyclic products `Bᵢ`.
pub fn extend_orbit_block(rhos: &[MatrixRep], amb: &Ambient, root: usize, cfg: &NumConfig) -> Result<ExtensionResult> {
    let m = rhos.len();
    if m == 0 {
        return Err(Error::OrbitStructure("empty orbit".into()));
    }
    for r in rhos {
        amb.check_rep(r)?;
    }
    if m == 1 {
        return extend_irreducible(&rhos[0], amb, root, cfg);
    }
    if !amb.n.is_multiple_of(m) {
        return Err(Error::OrbitStructure(format!("orbit size {m} does not divide {}", amb.n)));
    }
    for i in 0..m {
        if !irreducible(&rhos[i], cfg)? {
            return Err(Error::NotIrreducible);
        }
        let moved = amb.inner_power(&rhos[0], i)?;
        if equivalent(&moved, &rhos[i], cfg)?.is_none() {
            return Err(Error::OrbitStructure(format!("ρ_{i} is not ρ_0∘Int_g^{i}")));
        }
        for j in 0..i {
            if equivalent(&rhos[i], &rhos[j], cfg)?.is_some() {
                return Err(Error::OrbitStructure(format!("ρ_{j} ≅ ρ_{i}")));
            }
        }
    }
    let d = rhos[0].dim();
    let mut blocks = Vec::with_capacity(m);
    for i in 0..m {
        let next = (i + 1) % m;
        let target = amb.inner(&rhos[i], amb.lift)?;
        let a = equivalent(&rhos[next], &target, cfg)?
            .ok_or_else(|| Error::OrbitStructure(format!("no intertwiner ρ_{next} → ρ_{i}∘Int_g")))?;
        blocks.push(normalized(a));
    }
    let mut t = Mat::zeros(m * d, m * d);
    for (i, a) in blocks.iter().enumerate() {
        t.view_mut((i * d, ((i + 1) % m) * d), (d, d)).copy_from(a);
    }
    let p = amb.n / m;
    let gn = amb.kernel.local_index(amb.lift_power_n()).expect("gⁿ ∈ K");
    let mut lambdas = Vec::with_capacity(m);
    let mut traces = Vec::with_capacity(m);
    let mut schur: f64 = 0.0;
    for i in 0..m {
        let mut b = identity(d);
        for j in 0..m {
            b *= &blocks[(i + j) % m];
        }
        let bp = crate::linalg::pow(&b, p);
        let target = rhos[i].image(gn);
        // ρᵢ(gⁿ) = λᵢ Bᵢ^p
        let bp_inv = inverse(&bp).ok_or_else(|| Error::Dimension("block product is singular".into()))?;
        let (lambda, r) = schur_scalar(&(target * bp_inv));
        schur = schur.max(r);
        lambdas.push(lambda);
        traces.push(target.trace());
    }
    if schur > cfg.tol {
        return Err(Error::NotScalar(schur));
    }
    let spread = |v: &[C64]| {
        let scale = v[0].norm().max(1.0);
        v.iter().map(|z| (z - v[0]).norm() / scale).fold(0.0, f64::max)
    };
    let trace_spread = spread(&traces).max(spread(&lambdas));
    if trace_spread > 10.0 * cfg.tol {
        return Err(Error::ScalarMismatch(format!("λᵢ or Tr ρᵢ(gⁿ) differ by {trace_spread:.3e}")));
    }
    let lambda = lambdas[0];
    // Tⁿ = ⊕ Bᵢ^p = λ⁻¹ ρ(gⁿ), so μⁿ = λ.
    let mu = nth_root(lambda, amb.n, root);
    let t = t * mu;
    let sum = direct_sum_all(&rhos.iter().collect::<Vec<_>>())?;
    let (rep, homomorphism) = amb.extension_from(&sum, &t, cfg)?;
    let power = power_residual(&t, &sum, amb);
    Ok(ExtensionResult {
        rep,
        restricted: sum,
        t,
        lift: amb.lift,
        n: amb.n,
        lambda,
        block_lambdas: lambdas,
        mu,
        root: root % amb.n,
        branch: Branch::OrbitBlock,
        residuals: ExtensionResiduals { homomorphism, power, restriction: 0.0, schur, traces: trace_spread },
    })
}

/// One `Γ`-orbit of irreducible classes occurring in a semisimple `ρ`.
#[derive(Clone, Debug)]
pub struct OrbitPart {
    /// Class representatives `ρ₀, ρ₀∘Int_g, …` (up to equivalence).
    pub members: Vec<MatrixRep>,
    pub multiplicity: usize,
    /// Extensions of the orbit sum for roots `0..n`.
    pub extensions: Vec<ExtensionResult>,
}

/// `ρ` written as `M (⊕_orbits ⊕_copies orbit sum) M⁻¹` on `K`, with the
/// extensions available per orbit.
#[derive(Clone, Debug)]
pub struct SemisimpleExtension {
    rho: MatrixRep,
    ambient: Ambient,
    basis: Mat,
    basis_inv: Mat,
    pub orbits: Vec<OrbitPart>,
}

struct ClassSlot {
    rep: MatrixRep,
    /// (block offset, block dim, W) with block = W rep W⁻¹.
    positions: Vec<(usize, Mat)>,
}

/// Invariant semisimple `ρ`: decompose, group isotypic components into
/// orbits under `Int_g`, and extend each orbit.
pub fn extend_semisimple(rho: &MatrixRep, amb: &Ambient, cfg: &NumConfig) -> Result<SemisimpleExtension> {
    amb.check_rep(rho)?;
    let moved = amb.inner(rho, amb.lift)?;
    if equivalent(rho, &moved, cfg)?.is_none() {
        return Err(Error::NotInvariant("ρ∘Int_g ≇ ρ for the generator lift".into()));
    }
    let dec = decompose(rho, cfg)?;
    let offsets = dec.offsets();
    let mut classes: Vec<ClassSlot> = Vec::new();
    for (block, &off) in dec.blocks.iter().zip(&offsets) {
        let mut placed = false;
        for class in classes.iter_mut() {
            if let Some(w) = equivalent(&class.rep, block, cfg)? {
                class.positions.push((off, w));
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(ClassSlot { rep: block.clone(), positions: vec![(off, identity(block.dim()))] });
        }
    }
    classes.sort_by(|a, b| canonical_cmp(&a.rep, &b.rep));

    let mut orbit_classes: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; classes.len()];
    for start in 0..classes.len() {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        for i in 1..=amb.n {
            let image = amb.inner_power(&classes[start].rep, i)?;
            let mut hit = None;
            for (j, class) in classes.iter().enumerate() {
                if equivalent(&class.rep, &image, cfg)?.is_some() {
                    hit = Some(j);
                    break;
                }
            }
            match hit {
                Some(j) if j == start => break,
                Some(j) if !assigned[j] => {
                    assigned[j] = true;
                    members.push(j);
                }
                Some(_) => return Err(Error::OrbitStructure("orbits overlap".into())),
                None => return Err(Error::NotInvariant(format!("ρ₀∘Int_g^{i} does not occur in ρ"))),
            }
        }
        let mult = classes[start].positions.len();
        if members.iter().any(|&j| classes[j].positions.len() != mult) {
            return Err(Error::NotInvariant("multiplicities vary along an orbit".into()));
        }
        orbit_classes.push(members);
    }

    let parts = par::map_slice(cfg.exec, &orbit_classes, |members| -> Result<OrbitPart> {
        let reps: Vec<MatrixRep> = members.iter().map(|&j| classes[j].rep.clone()).collect();
        let first = extend_orbit_block(&reps, amb, 0, cfg)?;
        let extensions = first.all_roots(amb, cfg)?;
        Ok(OrbitPart { members: reps, multiplicity: classes[members[0]].positions.len(), extensions })
    });
    let orbits = parts.into_iter().collect::<Result<Vec<_>>>()?;

    // Columns of M: orbit by orbit, copy by copy, member by member.
    let d = rho.dim();
    let mut m = Mat::zeros(d, d);
    let mut col = 0;
    for members in &orbit_classes {
        for c in 0..classes[members[0]].positions.len() {
            for &j in members {
                let (off, w) = &classes[j].positions[c];
                let bd = w.nrows();
                let cols = dec.basis.columns(*off, bd) * w;
                m.view_mut((0, col), (d, bd)).copy_from(&cols);
                col += bd;
            }
        }
    }
    let basis_inv = inverse(&m).ok_or_else(|| Error::Decomposition("assembled basis is singular".into()))?;
    Ok(SemisimpleExtension { rho: rho.clone(), ambient: amb.clone(), basis: m, basis_inv, orbits })
}

impl SemisimpleExtension {
    pub fn rho(&self) -> &MatrixRep {
        &self.rho
    }

    /// `choices[o][c]` is the root for copy `c` of orbit `o`.
    pub fn assemble(&self, choices: &[Vec<usize>], cfg: &NumConfig) -> Result<ExtensionResult> {
        if choices.len() != self.orbits.len() {
            return Err(Error::Dimension("one root list per orbit expected".into()));
        }
        let mut ts = Vec::new();
        let mut lambdas = Vec::new();
        for (orbit, roots) in self.orbits.iter().zip(choices) {
            if roots.len() != orbit.multiplicity {
                return Err(Error::Dimension("one root per copy expected".into()));
            }
            for &r in roots {
                let ext = &orbit.extensions[r % self.ambient.n];
                ts.push(&ext.t);
                lambdas.push(ext.lambda);
            }
        }
        let t_sum = block_diag(&ts);
        let t = &self.basis * t_sum * &self.basis_inv;
        let (rep, homomorphism) = self.ambient.extension_from(&self.rho, &t, cfg)?;
        let power = power_residual(&t, &self.rho, &self.ambient);
        let schur = self
            .orbits
            .iter()
            .flat_map(|o| o.extensions.iter().map(|e| e.residuals.schur))
            .fold(0.0, f64::max);
        let root = choices.iter().flatten().next().copied().unwrap_or(0);
        Ok(ExtensionResult {
            rep,
            restricted: self.rho.clone(),
            t,
            lift: self.ambient.lift,
            n: self.ambient.n,
            lambda: lambdas.first().copied().unwrap_or(C64::new(1.0, 0.0)),
            block_lambdas: lambdas,
            mu: C64::new(1.0, 0.0),
            root,
            branch: if self.orbits.len() == 1 && self.orbits[0].multiplicity == 1 {
                self.orbits[0].extensions[root].branch
            } else {
                Branch::SemisimpleSum
            },
            residuals: ExtensionResiduals { homomorphism, power, restriction: 0.0, schur, traces: 0.0 },
        })
    }

    /// Root 0 everywhere.
    pub fn canonical(&self, cfg: &NumConfig) -> Result<ExtensionResult> {
        let choices: Vec<Vec<usize>> = self.orbits.iter().map(|o| vec![0; o.multiplicity]).collect();
        self.assemble(&choices, cfg)
    }

    /// Every combination of root choices; `n^(copies)` results.
    pub fn all_extensions(&self, cfg: &NumConfig) -> Result<Vec<ExtensionResult>> {
        let slots: usize = self.orbits.iter().map(|o| o.multiplicity).sum();
        let n = self.ambient.n;
        let total = n.checked_pow(slots as u32).ok_or_else(|| Error::Dimension("too many extensions".into()))?;
        (0..total)
            .map(|mut code| {
                let choices: Vec<Vec<usize>> = self
                    .orbits
                    .iter()
                    .map(|o| {
                        (0..o.multiplicity)
                            .map(|_| {
                                let r = code % n;
                                code /= n;
                                r
                            })
                            .collect()
                    })
                    .collect();
                self.assemble(&choices, cfg)
            })
            .collect()
    }
}

/// The induced representation from `K` to the ambient in the basis
/// `{gⁱ ⊗ v}`: the generator lift shifts block `i` to `i+1` by the identity,
/// with `ρ(gⁿ)` in the corner, and `k ∈ K` acts on block `i` by
/// `ρ(g⁻ⁱ k gⁱ)`.
pub fn block_theta_induce(rho: &MatrixRep, amb: &Ambient) -> Result<MatrixRep> {
    amb.check_rep(rho)?;
    let (n, d) = (amb.n, rho.dim());
    let h = &amb.group;
    let images = (0..h.order())
        .map(|x| {
            let mut out = Mat::zeros(n * d, n * d);
            for j in 0..n {
                let y = h.mul(x, amb.lift_powers[j]);
                let (c, k) = amb.split(y);
                out.view_mut((c * d, j * d), (d, d)).copy_from(rho.image(k));
            }
            out
        })
        .collect();
    Ok(MatrixRep::assemble(h.clone(), images, 1e-10))
}

/// One orbit of `Irr(K)` under `Γ` in the twisted ambient, with its
/// extensions and where they land in `Irr(G_χ)`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    /// Indices into the irreducibles of `K`.
    pub members: Vec<usize>,
    pub size: usize,
    pub equivariant: bool,
    pub extensions: usize,
    pub distinct_extensions: usize,
    /// Irrep of `G_χ` equivalent to the extension with root `r`.
    pub irrep_for_root: Vec<usize>,
    pub max_residual: f64,
    #[serde(serialize_with = "serialize_mat")]
    pub t: Mat,
}

fn serialize_mat<S: serde::Serializer>(m: &Mat, s: S) -> std::result::Result<S::Ok, S::Error> {
    to_nested(m).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub gamma_order: usize,
    pub k_irreps: usize,
    pub equivariant_irreducible_classes: usize,
    pub orbit_classes: usize,
    pub gchi_irreps: usize,
    pub gchi_irrep_dims: Vec<usize>,
    pub orbits: Vec<OrbitSummary>,
    /// Orbit of the restriction of each irrep of `G_χ`.
    pub restriction_orbit: Vec<usize>,
    pub bijection: bool,
    pub checks: Vec<NamedCheck>,
    pub pass: bool,
}

fn find_equivalent(target: &MatrixRep, pool: &[MatrixRep], cfg: &NumConfig) -> Result<Option<usize>> {
    for (i, r) in pool.iter().enumerate() {
        if equivalent(r, target, cfg)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Both directions of the correspondence between `Irr(G_χ)` and
/// `Γ`-orbits of `Irr(K)` paired with characters of `Γ`.
pub fn correspond(ctx: &TwistContext, cfg: &NumConfig) -> Result<CorrespondenceReport> {
    let amb = ctx.ambient();
    let n = amb.n();
    let k_irreps = irreps(ctx.kernel().group(), cfg)?;
    let g_irreps = irreps(ctx.twisted().group(), cfg)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool, residual: f64| checks.push(NamedCheck { name: name.into(), pass, residual });

    let mut equivariant_irreducible = 0;
    for r in &k_irreps {
        if ctx.satisfies_equivariance(r, cfg)?.holds {
            equivariant_irreducible += 1;
        }
    }

    // Orbits of Irr(K) under ρ ↦ ρ∘Int^χ_g.
    let mut assigned = vec![usize::MAX; k_irreps.len()];
    let mut orbit_members: Vec<Vec<usize>> = Vec::new();
    for start in 0..k_irreps.len() {
        if assigned[start] != usize::MAX {
            continue;
        }
        let o = orbit_members.len();
        let mut members = vec![start];
        assigned[start] = o;
        for i in 1..=n {
            let image = amb.inner_power(&k_irreps[start], i)?;
            let j = find_equivalent(&image, &k_irreps, cfg)?
                .ok_or_else(|| Error::Decomposition("Int^χ_g maps an irrep outside Irr(K)".into()))?;
            if j == start {
                break;
            }
            if assigned[j] != usize::MAX {
                return Err(Error::OrbitStructure("orbits overlap".into()));
            }
            assigned[j] = o;
            members.push(j);
        }
        orbit_members.push(members);
    }

    let mut orbits = Vec::new();
    let mut hit = vec![Vec::new(); g_irreps.len()];
    let mut twist_residual: f64 = 0.0;
    let mut all_equivariant = true;
    let mut counts_ok = true;
    let mut classes_ok = true;
    let mut contract: f64 = 0.0;
    for (o, members) in orbit_members.iter().enumerate() {
        let reps: Vec<MatrixRep> = members.iter().map(|&j| k_irreps[j].clone()).collect();
        let sum = direct_sum_all(&reps.iter().collect::<Vec<_>>())?;
        let equivariant = ctx.satisfies_equivariance(&sum, cfg)?.holds;
        all_equivariant &= equivariant;
        let base = extend_orbit_block(&reps, amb, 0, cfg)?;
        let all = base.all_roots(amb, cfg)?;
        let mut irrep_for_root = Vec::with_capacity(n);
        let mut max_residual: f64 = 0.0;
        for (r, ext) in all.iter().enumerate() {
            max_residual = max_residual.max(ext.residuals.homomorphism).max(ext.residuals.power);
            contract = contract.max(ext.residuals.power);
            // ρ̃_r(g^i k) = ω_n^(r·i) ρ̃_0(g^i k)
            for h in 0..amb.group().order() {
                let (i, _) = amb.split(h);
                let expect = base.rep.image(h) * root_of_unity((r * i) as i64, n as u32);
                twist_residual = twist_residual.max(rel_diff(ext.rep.image(h), &expect));
            }
            let idx = find_equivalent(&ext.rep, &g_irreps, cfg)?;
            match idx {
                Some(idx) => {
                    irrep_for_root.push(idx);
                    hit[idx].push((o, r));
                }
                None => {
                    irrep_for_root.push(usize::MAX);
                    counts_ok = false;
                }
            }
        }
        let p = n / members.len();
        // roots agree mod n/|O| exactly when the extensions are equivalent
        for r in 0..n {
            for s in 0..n {
                let same = irrep_for_root[r] == irrep_for_root[s];
                classes_ok &= same == (r % p == s % p);
            }
        }
        let mut distinct = irrep_for_root.clone();
        distinct.sort_unstable();
        distinct.dedup();
        counts_ok &= all.len() == n;
        orbits.push(OrbitSummary {
            members: members.clone(),
            size: members.len(),
            equivariant,
            extensions: all.len(),
            distinct_extensions: distinct.len(),
            irrep_for_root,
            max_residual,
            t: base.t.clone(),
        });
    }

    // Restriction direction.
    let mut restriction_orbit = Vec::with_capacity(g_irreps.len());
    let mut restrictions_ok = true;
    let mut restriction_residual: f64 = 0.0;
    for (idx, rep) in g_irreps.iter().enumerate() {
        let (res, report) = ctx.from_gchi_rep(rep, cfg)?;
        restrictions_ok &= report.holds;
        restriction_residual = restriction_residual.max(report.max_residual());
        let orbit = hit[idx].first().map(|&(o, _)| o);
        let matches = match orbit {
            Some(o) => {
                let reps: Vec<&MatrixRep> = orbit_members[o].iter().map(|&j| &k_irreps[j]).collect();
                equivalent(&direct_sum_all(&reps)?, &res, cfg)?.is_some()
            }
            None => false,
        };
        restrictions_ok &= matches;
        restriction_orbit.push(orbit.unwrap_or(usize::MAX));
    }

    // (orbit, r mod n/|O|) ↔ Irr(G_χ)
    let pairs: usize = orbits.iter().map(|o| n / o.size).sum();
    let bijection = classes_ok
        && counts_ok
        && pairs == g_irreps.len()
        && hit.iter().all(|h| !h.is_empty() && h.iter().all(|&(o, _)| o == h[0].0));

    check("restrictions_equivariant", restrictions_ok, restriction_residual);
    check("orbit_sums_equivariant", all_equivariant, 0.0);
    check("extension_counts", counts_ok, 0.0);
    check("power_contract", contract <= cfg.tol, contract);
    check("character_twists", twist_residual <= cfg.tol, twist_residual);
    check("bijection", bijection, 0.0);
    let pass = checks.iter().all(|c| c.pass);
    Ok(CorrespondenceReport {
        gamma_order: n,
        k_irreps: k_irreps.len(),
        equivariant_irreducible_classes: equivariant_irreducible,
        orbit_classes: orbits.len(),
        gchi_irreps: g_irreps.len(),
        gchi_irrep_dims: g_irreps.iter().map(MatrixRep::dim).collect(),
        orbits,
        restriction_orbit,
        bijection,
        checks,
        pass,
    })
}

/// `dim Hom(a, b)`.
pub fn hom_dim(a: &MatrixRep, b: &MatrixRep, cfg: &NumConfig) -> Result<usize> {
    Ok(intertwiners(a, b, cfg)?.dim())
}
