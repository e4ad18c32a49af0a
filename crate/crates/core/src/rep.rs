//! Complex matrix representations of finite groups.
//!
//! Numerics use a single relative tolerance `τ` (Frobenius norm, see
//! [`rel_diff`]). Representations loaded through [`MatrixRep::from_generators`]
//! are unitarized by averaging the Gram matrix over the group.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Character, FiniteGroup, Subgroup};
use crate::linalg::{
    block_diag, fro, hermitian_eigen, identity, inverse, kron, nullspace, random_complex, random_hermitian, rel_diff,
    singular_values, sqrt_psd, Mat, C64, ZERO,
};
use crate::par::{self, Exec};

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct NumConfig {
    pub tol: f64,
    pub seed: u64,
    pub exec: Exec,
    pub max_retries: usize,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig { tol: DEFAULT_TOL, seed: 0, exec: Exec::default(), max_retries: 8 }
    }
}

impl NumConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Clone, Debug)]
pub struct MatrixRep {
    group: Arc<FiniteGroup>,
    dim: usize,
    images: Vec<Mat>,
    unitary: bool,
}

pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || (a.order() == b.order() && a.flat_table() == b.flat_table())
}

impl MatrixRep {
    /// Full image table from generator images by breadth-first word
    /// expansion, verified as a homomorphism and then unitarized.
    pub fn from_generators(group: Arc<FiniteGroup>, gens: &[(usize, Mat)], cfg: &NumConfig) -> Result<Self> {
        let dim = match gens.first() {
            Some((_, m)) => m.nrows(),
            None if group.order() == 1 => 1,
            None => return Err(Error::NotGenerating { reached: 1, order: group.order() }),
        };
        for (s, m) in gens {
            if *s >= group.order() {
                return Err(Error::Dimension(format!("element {s} out of range")));
            }
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Dimension(format!("image of {s} is {}×{}, expected {dim}×{dim}", m.nrows(), m.ncols())));
            }
        }
        let mut images: Vec<Option<Mat>> = vec![None; group.order()];
        images[group.identity()] = Some(identity(dim));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, m) in gens {
                let y = group.mul(*s, x);
                if images[y].is_none() {
                    images[y] = Some(m * images[x].as_ref().unwrap());
                    queue.push_back(y);
                }
            }
        }
        let reached = images.iter().filter(|m| m.is_some()).count();
        if reached < group.order() {
            return Err(Error::NotGenerating { reached, order: group.order() });
        }
        let images: Vec<Mat> = images.into_iter().map(Option::unwrap).collect();
        for (s, m) in gens {
            let r = rel_diff(m, &images[*s]);
            if r > cfg.tol {
                return Err(Error::Homomorphism(*s, group.identity(), r));
            }
        }
        let rep = Self::from_images(group, images, cfg)?;
        rep.unitarize(cfg)
    }

    /// Validates the homomorphism property on all pairs; no unitarization.
    pub fn from_images(group: Arc<FiniteGroup>, images: Vec<Mat>, cfg: &NumConfig) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::Dimension(format!("{} images for a group of order {}", images.len(), group.order())));
        }
        let dim = images[0].nrows();
        if images.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::Dimension("inconsistent image sizes".into()));
        }
        if rel_diff(&images[group.identity()], &identity(dim)) > cfg.tol {
            return Err(Error::Homomorphism(group.identity(), group.identity(), rel_diff(&images[group.identity()], &identity(dim))));
        }
        let rep = Self::assemble(group, images, cfg.tol);
        let (residual, worst) = rep.homomorphism_residual(cfg.exec);
        if residual > cfg.tol {
            let (i, j) = worst.unwrap_or((0, 0));
            return Err(Error::Homomorphism(i, j, residual));
        }
        Ok(rep)
    }

    /// Trusted constructor; sets the identity image exactly and computes the
    /// unitary flag.
    pub(crate) fn assemble(group: Arc<FiniteGroup>, mut images: Vec<Mat>, tol: f64) -> Self {
        let dim = images[group.identity()].nrows();
        images[group.identity()] = identity(dim);
        let unitary = images.iter().all(|m| rel_diff(&(m * m.adjoint()), &identity(dim)) <= tol);
        MatrixRep { group, dim, images, unitary }
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let images = vec![identity(dim); group.order()];
        MatrixRep { group, dim, images, unitary: true }
    }

    /// Left regular representation: `R(g) e_x = e_{gx}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let images = (0..n)
            .map(|g| {
                let mut m = Mat::zeros(n, n);
                for x in 0..n {
                    m[(group.mul(g, x), x)] = C64::new(1.0, 0.0);
                }
                m
            })
            .collect();
        MatrixRep { group, dim: n, images, unitary: true }
    }

    pub fn from_character(group: Arc<FiniteGroup>, chi: &Character) -> Self {
        let images = (0..group.order()).map(|i| Mat::from_element(1, 1, chi.value(i))).collect();
        MatrixRep { group, dim: 1, images, unitary: true }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Mat {
        &self.images[i]
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Images of the group's generating set, for serialization.
    pub fn generator_images(&self) -> Vec<(usize, Mat)> {
        self.group.generators().iter().map(|&s| (s, self.images[s].clone())).collect()
    }

    /// Worst `‖ρ(i)ρ(j) − ρ(ij)‖` relative residual over all pairs.
    pub fn homomorphism_residual(&self, exec: Exec) -> (f64, Option<(usize, usize)>) {
        let n = self.group.order();
        let per_row: Vec<(f64, usize)> = par::map(exec, n, |i| {
            let mut worst = (0.0, 0);
            for j in 0..n {
                let r = rel_diff(&(&self.images[i] * &self.images[j]), &self.images[self.group.mul(i, j)]);
                let r = if r.is_nan() { f64::INFINITY } else { r };
                if r > worst.0 {
                    worst = (r, j);
                }
            }
            worst
        });
        per_row
            .iter()
            .enumerate()
            .fold((0.0, None), |acc, (i, &(r, j))| if r > acc.0 { (r, Some((i, j))) } else { acc })
    }

    pub fn unitary_residual(&self) -> f64 {
        self.images
            .iter()
            .map(|m| rel_diff(&(m * m.adjoint()), &identity(self.dim)))
            .fold(0.0, f64::max)
    }

    /// Weyl's trick: with `M = avg ρ(g)*ρ(g)`, return `M^½ ρ M^-½`.
    /// Already-unitary representations are returned unchanged.
    pub fn unitarize(&self, cfg: &NumConfig) -> Result<MatrixRep> {
        if self.unitary {
            return Ok(self.clone());
        }
        let (s, s_inv) = self.unitarizer()?;
        let images = self.images.iter().map(|m| &s * m * &s_inv).collect();
        let out = Self::assemble(self.group.clone(), images, cfg.tol.max(1e-12));
        Ok(out)
    }

    /// `(M^½, M^-½)` for the averaged Gram matrix.
    pub(crate) fn unitarizer(&self) -> Result<(Mat, Mat)> {
        let mut gram = Mat::zeros(self.dim, self.dim);
        for m in &self.images {
            gram += m.adjoint() * m;
        }
        gram /= C64::new(self.group.order() as f64, 0.0);
        sqrt_psd(&gram)
    }

    /// `g ↦ M ρ(g) M⁻¹`.
    pub fn conjugate(&self, m: &Mat) -> Result<MatrixRep> {
        let m_inv = inverse(m).ok_or_else(|| Error::Dimension("conjugating matrix is singular".into()))?;
        let images = self.images.iter().map(|x| m * x * &m_inv).collect();
        Ok(Self::assemble(self.group.clone(), images, 1e-10))
    }

    /// `ρ ∘ φ` for a group automorphism `φ` given on indices.
    pub fn compose_automorphism(&self, phi: &[usize]) -> MatrixRep {
        let images = phi.iter().map(|&x| self.images[x].clone()).collect();
        MatrixRep { group: self.group.clone(), dim: self.dim, images, unitary: self.unitary }
    }

    /// `g ↦ β(g) ρ(g)` for a one-dimensional character given by its values.
    pub fn twist(&self, values: &[C64]) -> MatrixRep {
        let images = self.images.iter().zip(values).map(|(m, &z)| m * z).collect();
        MatrixRep { group: self.group.clone(), dim: self.dim, images, unitary: self.unitary }
    }

    /// Bitwise equality of every image.
    pub fn same_matrices(&self, other: &MatrixRep) -> bool {
        self.dim == other.dim && self.images == other.images
    }

    pub fn max_diff(&self, other: &MatrixRep) -> f64 {
        self.images.iter().zip(&other.images).map(|(a, b)| rel_diff(a, b)).fold(0.0, f64::max)
    }
}

fn check_same(a: &MatrixRep, b: &MatrixRep) -> Result<()> {
    if same_group(&a.group, &b.group) {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

pub fn direct_sum(a: &MatrixRep, b: &MatrixRep) -> Result<MatrixRep> {
    direct_sum_all(&[a, b])
}

pub fn direct_sum_all(parts: &[&MatrixRep]) -> Result<MatrixRep> {
    let first = parts.first().ok_or_else(|| Error::Dimension("empty direct sum".into()))?;
    for p in parts {
        check_same(first, p)?;
    }
    let n = first.group.order();
    let images = (0..n).map(|g| block_diag(&parts.iter().map(|p| &p.images[g]).collect::<Vec<_>>())).collect();
    Ok(MatrixRep {
        group: first.group.clone(),
        dim: parts.iter().map(|p| p.dim).sum(),
        images,
        unitary: parts.iter().all(|p| p.unitary),
    })
}

pub fn tensor(a: &MatrixRep, b: &MatrixRep) -> Result<MatrixRep> {
    check_same(a, b)?;
    let images = a.images.iter().zip(&b.images).map(|(x, y)| kron(x, y)).collect();
    Ok(MatrixRep { group: a.group.clone(), dim: a.dim * b.dim, images, unitary: a.unitary && b.unitary })
}

/// Contragredient `g ↦ ρ(g⁻¹)ᵀ`.
pub fn dual(a: &MatrixRep) -> MatrixRep {
    let images = (0..a.group.order()).map(|g| a.images[a.group.inv(g)].transpose()).collect();
    MatrixRep { group: a.group.clone(), dim: a.dim, images, unitary: a.unitary }
}

/// Orthonormal (Frobenius) basis of `Hom_G(a, b) = {T : T a(g) = b(g) T}`.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace {
    pub basis: Vec<Mat>,
    pub singular_values: Vec<f64>,
    /// Worst relative intertwining residual of a basis element over all of `G`.
    pub residual: f64,
}

impl IntertwinerSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves `T a(s) − b(s) T = 0` over the generator set, then verifies the
/// basis on every element.
pub fn intertwiners(a: &MatrixRep, b: &MatrixRep, cfg: &NumConfig) -> Result<IntertwinerSpace> {
    check_same(a, b)?;
    let (d1, d2) = (a.dim, b.dim);
    let unknowns = d1 * d2;
    let gens = a.group.generators();
    let mut system = Mat::zeros(gens.len().max(1) * unknowns, unknowns);
    let eye1 = identity(d1);
    let eye2 = identity(d2);
    for (row, &s) in gens.iter().enumerate() {
        // vec(T A) = (Aᵀ ⊗ I) vec T, vec(B T) = (I ⊗ B) vec T, column-major
        let block = kron(&a.images[s].transpose(), &eye2) - kron(&eye1, &b.images[s]);
        system.view_mut((row * unknowns, 0), (unknowns, unknowns)).copy_from(&block);
    }
    let (null, singular_values) = nullspace(&system, cfg.tol);
    let basis: Vec<Mat> = (0..null.ncols()).map(|c| Mat::from_column_slice(d2, d1, null.column(c).as_slice())).collect();
    let residual = basis
        .iter()
        .map(|t| {
            let scale = fro(t).max(f64::MIN_POSITIVE);
            (0..a.group.order())
                .map(|g| fro(&(t * &a.images[g] - &b.images[g] * t)) / scale)
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    Ok(IntertwinerSpace { basis, singular_values, residual })
}

/// An invertible `T` with `T a(g) T⁻¹ = b(g)` for all `g`, if one exists.
/// Scaled so that `‖T‖_F = √dim`.
pub fn equivalent(a: &MatrixRep, b: &MatrixRep, cfg: &NumConfig) -> Result<Option<Mat>> {
    check_same(a, b)?;
    if a.dim != b.dim {
        return Ok(None);
    }
    // Characters of equivalent representations agree to rounding error.
    let (ca, cb) = (character_of(a), character_of(b));
    if ca.values.iter().zip(&cb.values).any(|(x, y)| (x - y).norm() > 1e-4 * (a.dim as f64).max(1.0)) {
        return Ok(None);
    }
    let space = intertwiners(a, b, cfg)?;
    if space.basis.is_empty() {
        return Ok(None);
    }
    let mut rng = cfg.rng(0xE0);
    for _ in 0..4 {
        let mut t = Mat::zeros(a.dim, a.dim);
        for basis in &space.basis {
            t += basis * random_complex(&mut rng);
        }
        let sv = singular_values(&t);
        let (smax, smin) = (sv[0], *sv.last().unwrap());
        if smin > cfg.tol.sqrt() * smax {
            let scale = (a.dim as f64).sqrt() / fro(&t);
            return Ok(Some(t * C64::new(scale, 0.0)));
        }
    }
    Ok(None)
}

/// `max_g ‖T a(g) T⁻¹ − b(g)‖` (relative), infinite for a singular `T`.
pub fn witness_residual(a: &MatrixRep, b: &MatrixRep, t: &Mat) -> f64 {
    let Some(t_inv) = inverse(t) else { return f64::INFINITY };
    a.images
        .iter()
        .zip(&b.images)
        .map(|(x, y)| rel_diff(&(t * x * &t_inv), y))
        .fold(0.0, f64::max)
}

pub fn irreducible(a: &MatrixRep, cfg: &NumConfig) -> Result<bool> {
    Ok(intertwiners(a, a, cfg)?.dim() == 1)
}

pub fn restrict(a: &MatrixRep, k: &Subgroup) -> Result<MatrixRep> {
    if !same_group(&a.group, k.parent()) {
        return Err(Error::GroupMismatch);
    }
    let images = k.members().iter().map(|&m| a.images[m].clone()).collect();
    Ok(MatrixRep { group: k.group().clone(), dim: a.dim, images, unitary: a.unitary })
}

/// Function-space induction to `k.parent()`. Basis: `(left coset lift, basis
/// vector of V)`, with lifts the least element of each coset `tK`.
pub fn induce(rho: &MatrixRep, k: &Subgroup) -> Result<MatrixRep> {
    if !same_group(&rho.group, k.group()) {
        return Err(Error::GroupMismatch);
    }
    let g = k.parent();
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut lifts = Vec::new();
    for x in 0..n {
        if coset[x] == usize::MAX {
            for &m in k.members() {
                coset[g.mul(x, m)] = lifts.len();
            }
            lifts.push(x);
        }
    }
    let d = rho.dim;
    let m = lifts.len();
    let images = (0..n)
        .map(|h| {
            let mut out = Mat::zeros(m * d, m * d);
            for (c_src, &t_src) in lifts.iter().enumerate() {
                let ht = g.mul(h, t_src);
                let c_dst = coset[ht];
                let y = g.mul(g.inv(lifts[c_dst]), ht);
                let local = k.local_index(y).expect("t⁻¹ h t' lies in K");
                out.view_mut((c_dst * d, c_src * d), (d, d)).copy_from(&rho.images[local]);
            }
            out
        })
        .collect();
    Ok(MatrixRep { group: g.clone(), dim: m * d, images, unitary: rho.unitary })
}

/// Character values per conjugacy class in canonical class order.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    pub classes: Vec<Vec<usize>>,
    pub values: Vec<C64>,
    /// Largest deviation of a trace from its class representative.
    pub spread: f64,
}

pub fn character_of(a: &MatrixRep) -> ClassFunction {
    let classes = a.group.conjugacy_classes();
    let traces: Vec<C64> = a.images.iter().map(|m| m.trace()).collect();
    let traces = &traces;
    let values: Vec<C64> = classes.iter().map(|c| traces[c[0]]).collect();
    let spread = classes
        .iter()
        .zip(&values)
        .flat_map(|(c, v)| c.iter().map(move |&x| (traces[x] - v).norm()))
        .fold(0.0, f64::max);
    ClassFunction { classes, values, spread }
}

impl ClassFunction {
    /// `⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g) conj(ψ(g))`.
    pub fn inner(&self, other: &ClassFunction) -> C64 {
        let order: usize = self.classes.iter().map(Vec::len).sum();
        let mut s = ZERO;
        for ((c, x), y) in self.classes.iter().zip(&self.values).zip(&other.values) {
            s += x * y.conj() * c.len() as f64;
        }
        s / order as f64
    }

    fn key(&self) -> Vec<(i64, i64)> {
        self.values.iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
    }
}

/// Canonical irrep order: dimension ascending, then character values on the
/// canonical class order compared lexicographically, larger `(re, im)` first.
pub fn canonical_cmp(a: &MatrixRep, b: &MatrixRep) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| character_of(b).key().cmp(&character_of(a).key()))
}

/// A unitary change of basis splitting a representation into irreducible
/// blocks: `basis_inv · ρ(g) · basis ≈ ⊕ blocks[i](g)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub basis: Mat,
    pub basis_inv: Mat,
    pub blocks: Vec<MatrixRep>,
}

impl Decomposition {
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.dim;
                Some(start)
            })
            .collect()
    }
}

/// Split into irreducibles by eigenspaces of random elements of the
/// commutant (group averages of seeded Hermitian matrices), recursing until
/// each block has character norm 1.
pub fn decompose(a: &MatrixRep, cfg: &NumConfig) -> Result<Decomposition> {
    let (unitary, to_unitary, from_unitary) = if a.unitary {
        (a.clone(), identity(a.dim), identity(a.dim))
    } else {
        let (s, s_inv) = a.unitarizer()?;
        let images = a.images.iter().map(|m| &s * m * &s_inv).collect();
        (MatrixRep::assemble(a.group.clone(), images, 1e-12), s, s_inv)
    };
    let mut rng = cfg.rng(0xDEC0);
    let pieces = split(&unitary, None, &mut rng, cfg)?;
    assemble_decomposition(a.dim, pieces, &to_unitary, &from_unitary)
}

fn assemble_decomposition(dim: usize, pieces: Vec<(Mat, MatrixRep)>, to_unitary: &Mat, from_unitary: &Mat) -> Result<Decomposition> {
    let mut p = Mat::zeros(dim, dim);
    let mut col = 0;
    let mut blocks = Vec::with_capacity(pieces.len());
    for (u, rep) in pieces {
        p.view_mut((0, col), u.shape()).copy_from(&u);
        col += u.ncols();
        blocks.push(rep);
    }
    if col != dim {
        return Err(Error::Decomposition(format!("blocks cover {col} of {dim} dimensions")));
    }
    // ρ = S⁻¹ u S, u = P (⊕) P*  ⇒  basis = S⁻¹ P, basis⁻¹ = P* S
    Ok(Decomposition { basis: from_unitary * &p, basis_inv: p.adjoint() * to_unitary, blocks })
}

fn character_norm(a: &MatrixRep) -> f64 {
    let c = character_of(a);
    c.inner(&c).re
}

/// Returns `(U, block)` pairs with `U` an isometry into `rep`'s space.
fn split(rep: &MatrixRep, commutant: Option<Mat>, rng: &mut ChaCha8Rng, cfg: &NumConfig) -> Result<Vec<(Mat, MatrixRep)>> {
    let norm = character_norm(rep);
    if (norm - norm.round()).abs() > 1e-6 * rep.dim as f64 {
        return Err(Error::Decomposition(format!("character norm {norm} is not an integer")));
    }
    if norm.round() as i64 == 1 {
        return Ok(vec![(identity(rep.dim), rep.clone())]);
    }
    let mut given = commutant;
    for _ in 0..cfg.max_retries {
        let a = match given.take() {
            Some(a) => a,
            None => average_conjugation(rep, &random_hermitian(rng, rep.dim), cfg.exec),
        };
        let Some(clusters) = eigen_clusters(rep, &a, cfg) else { continue };
        let mut out = Vec::new();
        for (u, sub) in clusters {
            for (w, block) in split(&sub, None, rng, cfg)? {
                out.push((&u * w, block));
            }
        }
        return Ok(out);
    }
    Err(Error::Ambiguous(cfg.max_retries))
}

/// `(1/|G|) Σ_g ρ(g) H ρ(g)*`, for unitary `ρ`.
fn average_conjugation(rep: &MatrixRep, h: &Mat, exec: Exec) -> Mat {
    let terms = par::map_slice(exec, &rep.images, |m| m * h * m.adjoint());
    let mut sum = Mat::zeros(rep.dim, rep.dim);
    for t in &terms {
        sum += t;
    }
    sum / C64::new(rep.group.order() as f64, 0.0)
}

/// Eigenspaces of a commutant element as subrepresentations. `None` when the
/// element does not split the space or a cluster is not invariant.
fn eigen_clusters(rep: &MatrixRep, a: &Mat, cfg: &NumConfig) -> Option<Vec<(Mat, MatrixRep)>> {
    let (values, vectors) = hermitian_eigen(a);
    let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let gap = cfg.tol * scale;
    let mut ranges = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            ranges.push(start..i);
            start = i;
        }
    }
    if ranges.len() < 2 {
        return None;
    }
    let invariance_tol = cfg.tol.sqrt();
    let mut out = Vec::with_capacity(ranges.len());
    for r in ranges {
        let u = vectors.columns(r.start, r.len()).into_owned();
        let uh = u.adjoint();
        let mut images = Vec::with_capacity(rep.images.len());
        for m in &rep.images {
            let mu = m * &u;
            let sub = &uh * &mu;
            if fro(&(&mu - &u * &sub)) > invariance_tol * (r.len() as f64).sqrt() {
                return None;
            }
            images.push(sub);
        }
        out.push((u, MatrixRep::assemble(rep.group.clone(), images, invariance_tol)));
    }
    Some(out)
}

/// Every irreducible representation up to equivalence, in canonical order.
///
/// The regular representation is split by a seeded random element of its
/// commutant; blocks are deduplicated by character. Each block is unitary.
pub fn irreps(group: &Arc<FiniteGroup>, cfg: &NumConfig) -> Result<Vec<MatrixRep>> {
    let regular = MatrixRep::regular(group.clone());
    let n = group.order();
    let mut rng = cfg.rng(0x1EE5);
    // The regular representation permutes the basis, so its average is a
    // re-indexing: A[u][v] = (1/|G|) Σ_g H[g⁻¹u][g⁻¹v].
    let h = random_hermitian(&mut rng, n);
    let rows = par::map(cfg.exec, n, |u| {
        (0..n)
            .map(|v| {
                let mut s = ZERO;
                for g in 0..n {
                    let gi = group.inv(g);
                    s += h[(group.mul(gi, u), group.mul(gi, v))];
                }
                s / n as f64
            })
            .collect::<Vec<_>>()
    });
    let commutant = Mat::from_fn(n, n, |u, v| rows[u][v]);
    let pieces = split(&regular, Some(commutant), &mut rng, cfg)?;

    let mut found: Vec<(Vec<(i64, i64)>, MatrixRep)> = Vec::new();
    let mut copies: Vec<usize> = Vec::new();
    for (_, block) in pieces {
        let key = character_of(&block).key();
        match found.iter().position(|(k, _)| *k == key) {
            Some(i) => copies[i] += 1,
            None => {
                found.push((key, block));
                copies.push(1);
            }
        }
    }
    let total: usize = found.iter().map(|(_, r)| r.dim * r.dim).sum();
    if total != n || found.iter().zip(&copies).any(|((_, r), &c)| c != r.dim) {
        return Err(Error::Decomposition(format!("Σ d² = {total}, expected {n}")));
    }
    let mut reps: Vec<MatrixRep> = found.into_iter().map(|(_, r)| r).collect();
    reps.sort_by(canonical_cmp);
    Ok(reps)
}
