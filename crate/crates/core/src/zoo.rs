//! Named small groups, the fixed fixtures and a generator of random valid
//! `(G, χ, action)` triples.

use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{
    check_star, kernel, permutation_closure, permutation_parity, validate_action, Character, CyclicAction,
    FiniteGroup, DEFAULT_ORDER_CAP,
};
use crate::iso;
use crate::linalg::{root_of_unity, scalar};
use crate::rep::{MatrixRep, NumConfig};

pub fn cyclic(n: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    FiniteGroup::from_table(format!("C{n}"), labels, &table, Some(0), usize::MAX).expect("cyclic group")
}

pub fn klein4() -> FiniteGroup {
    FiniteGroup::direct_product(&cyclic(2), &cyclic(2)).renamed("V4")
}

fn perm_group(name: &str, degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    FiniteGroup::from_permutations(name, degree, gens, None, usize::MAX).expect("permutation group")
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    perm_group(&format!("D{n}"), n, &[r, s])
}

pub fn symmetric3() -> FiniteGroup {
    perm_group("S3", 3, &symmetric_gens(3))
}

pub fn symmetric4() -> FiniteGroup {
    perm_group("S4", 4, &symmetric_gens(4))
}

pub fn alternating4() -> FiniteGroup {
    perm_group("A4", 4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]])
}

fn symmetric_gens(d: usize) -> Vec<Vec<usize>> {
    let mut t: Vec<usize> = (0..d).collect();
    t.swap(0, 1);
    let c: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    vec![t, c]
}

/// `Q8 = {±1, ±i, ±j, ±k}` in that index order.
pub fn quaternion() -> FiniteGroup {
    // unit products: (sign, unit) for units 1, i, j, k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (sa, ua) = (a % 2 == 1, a / 2);
                    let (sb, ub) = (b % 2 == 1, b / 2);
                    let (s, u) = UNIT[ua][ub];
                    2 * u + usize::from(sa ^ sb ^ s)
                })
                .collect()
        })
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].map(String::from).to_vec();
    FiniteGroup::from_table("Q8", labels, &table, Some(0), usize::MAX).expect("quaternion group")
}

/// Sign character of a symmetric group built by [`symmetric3`]/[`symmetric4`].
pub fn sign_character(group: &FiniteGroup) -> Character {
    let degree = match group.name() {
        "S3" => 3,
        "S4" => 4,
        other => panic!("sign character requested for {other}"),
    };
    let elements = permutation_closure(degree, &symmetric_gens(degree), usize::MAX).expect("closure");
    let exps: Vec<i64> = elements.iter().map(|p| permutation_parity(p) as i64).collect();
    Character::new(group, 2, &exps).expect("sign is a character")
}

/// All characters `G → μ_n`, trivial first.
pub fn characters(group: &FiniteGroup, n: u32) -> Vec<Character> {
    let gens = group.generators();
    let mut out = Vec::new();
    let total = (n as usize).pow(gens.len() as u32);
    for code in 0..total {
        let mut c = code;
        let assignment: Vec<u32> = gens
            .iter()
            .map(|_| {
                let e = (c % n as usize) as u32;
                c /= n as usize;
                e
            })
            .collect();
        if let Some(exps) = extend_exponents(group, gens, &assignment, n) {
            if let Ok(chi) = Character::new(group, n, &exps) {
                out.push(chi);
            }
        }
    }
    out
}

fn extend_exponents(group: &FiniteGroup, gens: &[usize], assignment: &[u32], n: u32) -> Option<Vec<i64>> {
    let mut exps = vec![None; group.order()];
    exps[group.identity()] = Some(0u32);
    let mut queue = std::collections::VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        let ex = exps[x].unwrap();
        for (&s, &es) in gens.iter().zip(assignment) {
            let y = group.mul(x, s);
            let ey = (ex + es) % n;
            match exps[y] {
                Some(e) if e != ey => return None,
                Some(_) => {}
                None => {
                    exps[y] = Some(ey);
                    queue.push_back(y);
                }
            }
        }
    }
    exps.into_iter().map(|e| e.map(i64::from)).collect()
}

/// Names checked by [`identify`], smallest order first.
fn catalog() -> &'static [(String, FiniteGroup)] {
    static CATALOG: OnceLock<Vec<(String, FiniteGroup)>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let c = cyclic;
        let x = FiniteGroup::direct_product;
        let mut v: Vec<(String, FiniteGroup)> = vec![
            ("V4".into(), klein4()),
            ("S3".into(), symmetric3()),
            ("C2xC4".into(), x(&c(2), &c(4))),
            ("C2xC2xC2".into(), x(&klein4(), &c(2))),
            ("D4".into(), dihedral(4)),
            ("Q8".into(), quaternion()),
            ("C3xC3".into(), x(&c(3), &c(3))),
            ("D5".into(), dihedral(5)),
            ("C2xC6".into(), x(&c(2), &c(6))),
            ("D6".into(), dihedral(6)),
            ("A4".into(), alternating4()),
            ("D7".into(), dihedral(7)),
            ("C2xC8".into(), x(&c(2), &c(8))),
            ("C4xC4".into(), x(&c(4), &c(4))),
            ("C2xC2xC4".into(), x(&klein4(), &c(4))),
            ("C2xD4".into(), x(&c(2), &dihedral(4))),
            ("C2xQ8".into(), x(&c(2), &quaternion())),
            ("D8".into(), dihedral(8)),
            ("C3xS3".into(), x(&c(3), &symmetric3())),
            ("D9".into(), dihedral(9)),
            ("D10".into(), dihedral(10)),
            ("S4".into(), symmetric4()),
            ("C2xA4".into(), x(&c(2), &alternating4())),
            ("C4xS3".into(), x(&c(4), &symmetric3())),
            ("C3xQ8".into(), x(&c(3), &quaternion())),
            ("D12".into(), dihedral(12)),
        ];
        v.sort_by_key(|(_, g)| g.order());
        v
    })
}

/// A catalog name for `g` up to isomorphism: `C<n>` when cyclic, otherwise
/// the first matching catalog entry.
pub fn identify(g: &FiniteGroup) -> Option<String> {
    if (0..g.order()).any(|x| g.element_order(x) == g.order()) {
        return Some(format!("C{}", g.order()));
    }
    catalog()
        .iter()
        .filter(|(_, h)| h.order() == g.order())
        .find(|(_, h)| iso::is_isomorphic(g, h))
        .map(|(name, _)| name.clone())
}

/// A complete `(G, χ, action)` input, plus representation files on `K` when
/// the fixture ships them.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub character: Option<Character>,
    pub action: Option<CyclicAction>,
    pub kernel_reps: Vec<(String, MatrixRep)>,
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let cfg = NumConfig::default();
    match name {
        "A" | "C" => {
            let g = Arc::new(symmetric3());
            let chi = sign_character(&g);
            let act = CyclicAction::trivial(&g, 2);
            let mut kernel_reps = Vec::new();
            if name == "C" {
                let k = kernel(&chi, &g)?;
                // (0 1 2) as a local index of A3
                let r = k.members().iter().position(|&m| g.label(m) == "(0 1 2)").expect("3-cycle in A3");
                let kg = k.group().clone();
                for (label, power) in [("rho_triv", 0), ("rho_omega", 1), ("rho_omega_bar", 2)] {
                    let rep = MatrixRep::from_generators(kg.clone(), &[(r, scalar(root_of_unity(power, 3)))], &cfg)?;
                    kernel_reps.push((label.to_string(), rep));
                }
            }
            Ok(Fixture { name: name.into(), group: g, character: Some(chi), action: Some(act), kernel_reps })
        }
        "B" => {
            let g = Arc::new(cyclic(4));
            let chi = Character::new(&g, 2, &[0, 1, 0, 1])?;
            let inversion: Vec<usize> = (0..4).map(|i| g.inv(i)).collect();
            let act = CyclicAction::from_generator(2, &inversion);
            Ok(Fixture { name: name.into(), group: g, character: Some(chi), action: Some(act), kernel_reps: Vec::new() })
        }
        "D" => Ok(Fixture {
            name: name.into(),
            group: Arc::new(dihedral(4)),
            character: None,
            action: None,
            kernel_reps: Vec::new(),
        }),
        other => Err(Error::UnknownFixture(other.into())),
    }
}

struct ZooEntry {
    group: Arc<FiniteGroup>,
    automorphisms: Vec<Vec<usize>>,
}

fn random_pool() -> &'static [ZooEntry] {
    static POOL: OnceLock<Vec<ZooEntry>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut groups: Vec<FiniteGroup> = [2, 3, 4, 5, 6, 8, 9, 10, 12].into_iter().map(cyclic).collect();
        groups.extend(catalog().iter().map(|(name, g)| g.clone().renamed(name.clone())));
        groups.retain(|g| g.order() <= 24);
        groups
            .into_iter()
            .map(|g| {
                let automorphisms = iso::automorphisms(&g);
                ZooEntry { group: Arc::new(g), automorphisms }
            })
            .collect()
    })
}

/// Groups available to [`random_triple`].
pub fn random_pool_groups() -> Vec<Arc<FiniteGroup>> {
    random_pool().iter().map(|e| e.group.clone()).collect()
}

#[derive(Clone, Debug)]
pub struct Triple {
    pub group: Arc<FiniteGroup>,
    pub character: Character,
    pub action: CyclicAction,
}

fn perm_power_is_identity(phi: &[usize], n: u32) -> bool {
    let mut x: Vec<usize> = (0..phi.len()).collect();
    for _ in 0..n {
        x = x.iter().map(|&i| phi[i]).collect();
    }
    x.iter().enumerate().all(|(i, &v)| i == v)
}

/// A random valid triple with `|G| ≤ max_order`: `χ` nontrivial into `μ_n`
/// (`n ∈ {2, 3, 4, 6}`) and an action generated by an automorphism `φ` with
/// `φⁿ = 1` and `χ∘φ = χ`. A nontrivial `φ` is preferred when one exists.
pub fn random_triple<R: Rng>(rng: &mut R, max_order: usize) -> Triple {
    let pool: Vec<&ZooEntry> = random_pool().iter().filter(|e| e.group.order() <= max_order.min(DEFAULT_ORDER_CAP)).collect();
    assert!(!pool.is_empty(), "no groups of order ≤ {max_order}");
    loop {
        let entry = pool.choose(rng).expect("nonempty pool");
        let n = *[2u32, 3, 4, 6].choose(rng).expect("nonempty");
        let chars: Vec<Character> = characters(&entry.group, n).into_iter().filter(|c| !c.is_trivial()).collect();
        let Some(chi) = chars.choose(rng).cloned() else { continue };
        let phis: Vec<&Vec<usize>> = entry
            .automorphisms
            .iter()
            .filter(|phi| perm_power_is_identity(phi, n) && (0..phi.len()).all(|i| chi.exponent(phi[i]) == chi.exponent(i)))
            .collect();
        let nontrivial: Vec<&&Vec<usize>> = phis.iter().filter(|p| p.iter().enumerate().any(|(i, &x)| i != x)).collect();
        let phi = if !nontrivial.is_empty() && rng.gen_bool(0.75) {
            **nontrivial.choose(rng).unwrap()
        } else {
            *phis.choose(rng).expect("identity always qualifies")
        };
        let action = CyclicAction::from_generator(n, phi);
        debug_assert!(validate_action(&action, &entry.group).is_valid());
        debug_assert!(check_star(&chi, &action).unwrap());
        return Triple { group: entry.group.clone(), character: chi, action };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn named_orders() {
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(symmetric4().order(), 24);
        assert_eq!(alternating4().order(), 12);
        assert_eq!(quaternion().order(), 8);
        assert!(!quaternion().is_abelian());
    }

    #[test]
    fn character_counts() {
        // |Hom(G, μ_n)| = |Hom(G^ab, μ_n)|
        assert_eq!(characters(&cyclic(4), 4).len(), 4);
        assert_eq!(characters(&cyclic(4), 2).len(), 2);
        assert_eq!(characters(&symmetric3(), 2).len(), 2);
        assert_eq!(characters(&symmetric3(), 3).len(), 1);
        assert_eq!(characters(&klein4(), 2).len(), 4);
        assert_eq!(characters(&alternating4(), 3).len(), 3);
    }

    #[test]
    fn identify_small_groups() {
        assert_eq!(identify(&klein4()).as_deref(), Some("V4"));
        assert_eq!(identify(&cyclic(6)).as_deref(), Some("C6"));
        assert_eq!(identify(&dihedral(3)).as_deref(), Some("S3"));
        assert_eq!(identify(&quaternion()).as_deref(), Some("Q8"));
    }

    #[test]
    fn fixtures_are_consistent() {
        for name in ["A", "B", "C"] {
            let f = fixture(name).unwrap();
            let chi = f.character.as_ref().unwrap();
            let act = f.action.as_ref().unwrap();
            assert!(validate_action(act, &f.group).is_valid());
            assert!(check_star(chi, act).unwrap());
        }
        assert_eq!(fixture("C").unwrap().kernel_reps.len(), 3);
        assert_eq!(fixture("D").unwrap().group.order(), 8);
        assert!(matches!(fixture("E"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn random_triples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_triple(&mut rng, 24);
            assert!(t.group.order() <= 24);
            assert!(!t.character.is_trivial());
            assert!(validate_action(&t.action, &t.group).is_valid());
            assert!(check_star(&t.character, &t.action).unwrap());
        }
    }
}
