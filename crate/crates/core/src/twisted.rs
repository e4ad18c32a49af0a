//! The twisted group `G_χ`: the underlying set of `G` with
//! `g ∗ h = g · h^(χ⁻¹(g))`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{kernel, star_violation, validate_action, Character, CyclicAction, FiniteGroup, Subgroup};
use crate::par::{self, Exec};

#[derive(Clone, Debug)]
pub struct TwistedGroup {
    base: Arc<FiniteGroup>,
    chi: Character,
    action: CyclicAction,
    twisted: Arc<FiniteGroup>,
    kernel_base: Subgroup,
    kernel_twisted: Subgroup,
}

/// Outcome of the structural checks run by the `twist` command.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TwistReport {
    pub star: bool,
    pub associative: bool,
    pub alpha_character: bool,
    pub k_normal: bool,
    pub action_descends: bool,
}

impl TwistReport {
    pub fn all(&self) -> bool {
        self.star && self.associative && self.alpha_character && self.k_normal && self.action_descends
    }
}

/// Exponent `k` with `χ⁻¹(g) = e^(2πik/n)`.
fn inverse_exponent(chi: &Character, g: usize) -> i64 {
    -(chi.exponent(g) as i64)
}

/// Builds `G_χ`. Refuses when the star condition fails or the action is
/// not a valid homomorphism `μ_n → Aut(G)`.
pub fn twist(base: Arc<FiniteGroup>, chi: Character, action: CyclicAction) -> Result<TwistedGroup> {
    twist_with(base, chi, action, Exec::default())
}

pub fn twist_with(base: Arc<FiniteGroup>, chi: Character, action: CyclicAction, exec: Exec) -> Result<TwistedGroup> {
    chi.check_on(&base)?;
    let report = validate_action(&action, &base);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidAction(v.to_string()));
    }
    if let Some((element, k)) = star_violation(&chi, &action)? {
        return Err(Error::StarFails { element, k });
    }
    let flat = twisted_table(&base, &chi, &action, exec);
    let twisted = FiniteGroup::from_flat(
        format!("{}_chi", base.name()),
        base.labels().to_vec(),
        flat,
        Some(base.identity()),
        exec,
    )?;
    let twisted = Arc::new(twisted);
    let kernel_base = kernel(&chi, &base)?;
    let kernel_twisted = kernel_base.reparent(twisted.clone())?;
    Ok(TwistedGroup { base, chi, action, twisted, kernel_base, kernel_twisted })
}

/// `t[g][h] = g · auts[−e(g) mod n](h)`, flat row-major.
pub fn twisted_table(base: &FiniteGroup, chi: &Character, action: &CyclicAction, exec: Exec) -> Vec<usize> {
    let n = base.order();
    par::map(exec, n, |g| {
        let aut = action.aut(inverse_exponent(chi, g));
        (0..n).map(|h| base.mul(g, aut[h])).collect::<Vec<_>>()
    })
    .concat()
}

impl TwistedGroup {
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn chi(&self) -> &Character {
        &self.chi
    }

    pub fn action(&self) -> &CyclicAction {
        &self.action
    }

    /// `G_χ` as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.twisted
    }

    /// `K = ker χ` inside `G`.
    pub fn kernel_base(&self) -> &Subgroup {
        &self.kernel_base
    }

    /// The same `K` inside `G_χ`; both share one local table.
    pub fn kernel_twisted(&self) -> &Subgroup {
        &self.kernel_twisted
    }

    pub fn star(&self, g: usize, h: usize) -> usize {
        self.twisted.mul(g, h)
    }

    /// `α_χ`, the character of `G_χ` with the same exponents as `χ`.
    pub fn alpha_character(&self) -> Character {
        let alpha = self.chi.clone();
        assert!(alpha.check_on(&self.twisted).is_ok(), "α_χ is not a homomorphism on G_χ");
        alpha
    }

    /// `h = (g⁻¹)^(χ(g))`, so that `h^(χ⁻¹(g)) = g⁻¹` and `g ∗ h = e`.
    pub fn twisted_inverse(&self, g: usize) -> usize {
        let h = self.action.apply(self.chi.exponent(g) as i64, self.base.inv(g));
        debug_assert_eq!(self.twisted.mul(g, h), self.base.identity());
        h
    }

    /// The action re-read on `G_χ`, asserted to be by automorphisms that keep
    /// `K` invariant.
    pub fn descend_action(&self) -> CyclicAction {
        let report = validate_action(&self.action, &self.twisted);
        assert!(report.is_valid(), "action does not descend to G_χ: {:?}", report.violations);
        for aut in self.action.auts() {
            assert!(self.kernel_base.members().iter().all(|&k| self.kernel_base.contains(aut[k])));
        }
        self.action.clone()
    }

    /// `Int^χ_g` on `K` in local indices: `h ↦ g ∗ h ∗ g⁻¹_χ`, checked against
    /// `h ↦ g · h^(χ⁻¹(g)) · g⁻¹`.
    pub fn twisted_inner(&self, g: usize) -> Vec<usize> {
        let gi = self.twisted_inverse(g);
        let k = &self.kernel_twisted;
        let aut = self.action.aut(inverse_exponent(&self.chi, g));
        k.members()
            .iter()
            .map(|&h| {
                let y = self.star(self.star(g, h), gi);
                debug_assert_eq!(y, self.base.conj(g, aut[h]));
                k.local_index(y).expect("K is normal in G_χ")
            })
            .collect()
    }

    pub fn report(&self) -> TwistReport {
        TwistReport {
            star: true,
            associative: self.twisted.check_associativity(Exec::default()).is_none(),
            alpha_character: self.chi.check_on(&self.twisted).is_ok(),
            k_normal: self.kernel_twisted.is_normal(),
            action_descends: validate_action(&self.action, &self.twisted).is_valid()
                && self
                    .action
                    .auts()
                    .iter()
                    .all(|aut| self.kernel_base.members().iter().all(|&k| self.kernel_base.contains(aut[k]))),
        }
    }
}

/// `g·h^(χ⁻¹(g))·k^(χ⁻¹(gh))`, the common expansion of both bracketings of
/// `g ∗ h ∗ k`.
pub fn triple_expansion(t: &TwistedGroup, g: usize, h: usize, k: usize) -> usize {
    let b = &t.base;
    let act = &t.action;
    let left = b.mul(g, act.apply(inverse_exponent(&t.chi, g), h));
    b.mul(left, act.apply(inverse_exponent(&t.chi, b.mul(g, h)), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;
    use crate::zoo;

    fn fixture_b() -> TwistedGroup {
        let f = zoo::fixture("B").unwrap();
        twist(f.group, f.character.unwrap(), f.action.unwrap()).unwrap()
    }

    #[test]
    fn fixture_b_is_klein_four() {
        let t = fixture_b();
        assert!(is_isomorphic(t.group(), &zoo::klein4()));
        assert_eq!(t.star(1, 1), 0);
        for g in 1..4 {
            assert_eq!(t.group().element_order(g), 2);
        }
        assert_eq!(t.group().identity(), t.base().identity());
        assert_eq!(t.group().labels(), t.base().labels());
    }

    #[test]
    fn trivial_action_keeps_table() {
        let f = zoo::fixture("A").unwrap();
        let t = twist(f.group.clone(), f.character.unwrap(), f.action.unwrap()).unwrap();
        assert_eq!(t.group().flat_table(), f.group.flat_table());
        for g in 0..6 {
            assert_eq!(t.twisted_inverse(g), f.group.inv(g));
        }
    }

    #[test]
    fn injective_character_fails_star() {
        let g = Arc::new(zoo::cyclic(4));
        let chi = Character::new(&g, 4, &[0, 1, 2, 3]).unwrap();
        let inv: Vec<usize> = (0..4).map(|i| g.inv(i)).collect();
        let act = CyclicAction::from_generator(4, &inv);
        let err = twist(g, chi, act).unwrap_err();
        assert!(matches!(err, Error::StarFails { .. }), "{err}");
    }

    #[test]
    fn invalid_action_is_refused() {
        let g = Arc::new(zoo::symmetric3());
        let chi = zoo::sign_character(&g);
        let inv: Vec<usize> = (0..6).map(|i| g.inv(i)).collect();
        let act = CyclicAction::new(2, vec![(0..6).collect(), inv]);
        assert!(matches!(twist(g, chi, act), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn associativity_matches_expansion() {
        let t = fixture_b();
        for g in 0..4 {
            for h in 0..4 {
                for k in 0..4 {
                    let e = triple_expansion(&t, g, h, k);
                    assert_eq!(t.star(g, t.star(h, k)), e);
                    assert_eq!(t.star(t.star(g, h), k), e);
                }
            }
        }
    }

    #[test]
    fn alpha_inverse_and_inner() {
        let t = fixture_b();
        let alpha = t.alpha_character();
        for g in 0..4 {
            for h in 0..4 {
                assert_eq!(alpha.exponent(t.star(g, h)), (alpha.exponent(g) + alpha.exponent(h)) % 2);
            }
        }
        assert_eq!(t.twisted_inverse(0), 0);
        assert_eq!(t.twisted_inverse(1), 1);
        assert_eq!(t.twisted_inner(1), vec![0, 1]);
        let act = t.descend_action();
        assert_eq!(act, *t.action());
        assert!(t.report().all());

        let f = zoo::fixture("C").unwrap();
        let t = twist(f.group.clone(), f.character.unwrap(), f.action.unwrap()).unwrap();
        let g = f.group;
        let tr = (0..6).find(|&i| g.label(i) == "(0 1)").unwrap();
        let k = t.kernel_twisted();
        let perm = t.twisted_inner(tr);
        let r = k.local_index((0..6).find(|&i| g.label(i) == "(0 1 2)").unwrap()).unwrap();
        let r2 = k.local_index((0..6).find(|&i| g.label(i) == "(0 2 1)").unwrap()).unwrap();
        assert_eq!(perm[r], r2);
        assert_eq!(perm[r2], r);
        assert!(t.alpha_character().exponents() == zoo::sign_character(&g).exponents());
    }
}
