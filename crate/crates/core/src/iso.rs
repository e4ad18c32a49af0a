//! Isomorphism and automorphism search by backtracking over generator images.

use std::collections::VecDeque;

use crate::group::FiniteGroup;

/// An isomorphism `a → b` as an index map, if one exists.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() || order_profile(a) != order_profile(b) {
        return None;
    }
    let mut found = None;
    search(a, b, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

pub fn is_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

/// All automorphisms, each as an index permutation. The identity comes first.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search(g, g, &mut |m| {
        out.push(m.to_vec());
        true
    });
    out.sort();
    out
}

fn order_profile(g: &FiniteGroup) -> Vec<usize> {
    let mut orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    orders.sort_unstable();
    orders
}

fn search(a: &FiniteGroup, b: &FiniteGroup, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let gens = a.generators().to_vec();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let ord = a.element_order(s);
            (0..b.order()).filter(|&y| b.element_order(y) == ord).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    descend(a, b, &gens, &candidates, &mut images, visit);
}

fn descend(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let depth = images.len();
    if depth == gens.len() {
        let map = match extend(a, b, gens, images) {
            Some(m) => m,
            None => return true,
        };
        if map.iter().any(Option::is_none) {
            return true;
        }
        let map: Vec<usize> = map.into_iter().map(Option::unwrap).collect();
        let mut hit = vec![false; b.order()];
        if map.iter().any(|&y| std::mem::replace(&mut hit[y], true)) {
            return true;
        }
        return visit(&map);
    }
    for &y in &candidates[depth] {
        images.push(y);
        // Prune on the partial subgroup before going deeper.
        let keep_going = if extend(a, b, &gens[..=depth], images).is_some() {
            descend(a, b, gens, candidates, images, visit)
        } else {
            true
        };
        images.pop();
        if !keep_going {
            return false;
        }
    }
    true
}

/// Extend `gens[i] ↦ images[i]` over the generated subgroup; `None` when the
/// assignment is not a well-defined injective homomorphism on it.
fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; a.order()];
    let mut used = vec![false; b.order()];
    map[a.identity()] = Some(b.identity());
    used[b.identity()] = true;
    let mut queue = VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &fs) in gens.iter().zip(images) {
            let y = a.mul(x, s);
            let fy = b.mul(fx, fs);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[fy], true) {
                        return None;
                    }
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    Some(map)
}
