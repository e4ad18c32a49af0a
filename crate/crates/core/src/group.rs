//! Finite groups given by Cayley tables, together with subgroups, quotients,
//! characters into `μ_n` and cyclic automorphism actions.
//!
//! Everything here is exact integer arithmetic on element indices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, C64};
use crate::par::{self, Exec};

pub const DEFAULT_ORDER_CAP: usize = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates `table` (entries in range, Latin square, identity,
    /// associativity) and builds the group.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: &[Vec<usize>],
        identity: Option<usize>,
        cap: usize,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Malformed("empty table".into()));
        }
        if n > cap {
            return Err(Error::OrderExceeded { found: n, limit: cap });
        }
        if labels.len() != n {
            return Err(Error::Malformed(format!("{} labels for a table of order {n}", labels.len())));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Malformed(format!("row {i} has out-of-range entry {bad}")));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(name.into(), labels, flat, identity, Exec::default())
    }

    pub(crate) fn from_flat(
        name: String,
        labels: Vec<String>,
        table: Vec<usize>,
        identity: Option<usize>,
        exec: Exec,
    ) -> Result<Self> {
        let n = labels.len();
        check_latin(&table, n)?;
        let identity = match identity {
            Some(e) => {
                if e >= n || (0..n).any(|j| table[e * n + j] != j || table[j * n + e] != j) {
                    return Err(Error::Malformed(format!("element {e} is not an identity")));
                }
                e
            }
            None => (0..n)
                .find(|&e| (0..n).all(|j| table[e * n + j] == j && table[j * n + e] == j))
                .ok_or_else(|| Error::Malformed("no identity element".into()))?,
        };
        if let Some((i, j, k)) = find_associativity_violation(&table, n, exec) {
            return Err(Error::NotAssociative(i, j, k));
        }
        // Latin + identity give a unique right inverse; associativity makes it two-sided.
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| table[i * n + j] == identity).expect("Latin row"))
            .collect();
        let mut group = FiniteGroup { name, labels, order: n, table, identity, inverse, generators: Vec::new() };
        group.generators = group.greedy_generators();
        Ok(group)
    }

    /// Closure of permutation generators of `0..degree`. Products compose as
    /// functions: `(p·q)(x) = p(q(x))`. Elements are ordered by discovery
    /// from the identity.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
        declared_order: Option<usize>,
        cap: usize,
    ) -> Result<Self> {
        for (idx, p) in generators.iter().enumerate() {
            if p.len() != degree || !is_permutation(p) {
                return Err(Error::Malformed(format!("generator {idx} is not a permutation of 0..{degree}")));
            }
        }
        let limit = declared_order.unwrap_or(cap).min(cap);
        let elements = permutation_closure(degree, generators, limit)?;
        let index: HashMap<&[usize], usize> = elements.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        if let Some(d) = declared_order {
            if elements.len() != d {
                return Err(Error::Malformed(format!("closure has order {}, declared {d}", elements.len())));
            }
        }
        let n = elements.len();
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = index[compose(&elements[i], &elements[j]).as_slice()];
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(name.into(), labels, table, Some(0), Exec::default())
    }

    /// Direct product with elements `(a, b)` at index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb])).collect();
        let name = format!("{}x{}", a.name, b.name);
        Self::from_flat(name, labels, table, Some(a.identity * nb + b.identity), Exec::default())
            .expect("direct product of groups is a group")
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a b a⁻¹`
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inverse[a])
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse[a] } else { a };
        let mut r = self.identity;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.table
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup closure of `gens` as a sorted member list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        for x in 0..self.order {
            if !span[x] {
                gens.push(x);
                for m in self.closure(&gens) {
                    span[m] = true;
                }
            }
        }
        gens
    }

    /// Conjugacy classes in canonical order: sorted by (size, least index),
    /// members ascending.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if assigned[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class.into_iter().collect::<Vec<_>>());
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        classes
    }

    /// First associativity violation in lexicographic order, if any.
    pub fn check_associativity(&self, exec: Exec) -> Option<(usize, usize, usize)> {
        find_associativity_violation(&self.table, self.order, exec)
    }

    /// Index of each element under `f`, if `f` respects the table.
    pub fn is_homomorphism_to(&self, target: &FiniteGroup, f: &[usize]) -> bool {
        f.len() == self.order
            && (0..self.order).all(|a| (0..self.order).all(|b| f[self.mul(a, b)] == target.mul(f[a], f[b])))
    }
}

pub fn check_latin(table: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![usize::MAX; n];
    for i in 0..n {
        for j in 0..n {
            let v = table[i * n + j];
            if seen[v] == i {
                return Err(Error::NotLatinSquare(format!("row {i} repeats entry {v}")));
            }
            seen[v] = i;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..n {
            let v = table[i * n + j];
            if seen[v] == j {
                return Err(Error::NotLatinSquare(format!("column {j} repeats entry {v}")));
            }
            seen[v] = j;
        }
    }
    Ok(())
}

/// Exhaustive `(ij)k = i(jk)` over all triples; rows of `i` are scanned in
/// parallel under `Exec::Parallel`.
pub fn find_associativity_violation(table: &[usize], n: usize, exec: Exec) -> Option<(usize, usize, usize)> {
    par::find_first(exec, n, |i| {
        for j in 0..n {
            let ij = table[i * n + j];
            for k in 0..n {
                if table[ij * n + k] != table[i * n + table[j * n + k]] {
                    return Some((i, j, k));
                }
            }
        }
        None
    })
}

/// Elements of the permutation group generated by `generators`, in
/// breadth-first discovery order from the identity.
pub fn permutation_closure(degree: usize, generators: &[Vec<usize>], limit: usize) -> Result<Vec<Vec<usize>>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        frontier += 1;
        for s in generators {
            let y = compose(s, &x);
            if !index.contains_key(&y) {
                if elements.len() == limit {
                    return Err(Error::OrderExceeded { found: elements.len() + 1, limit });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
    }
    Ok(elements)
}

/// Parity of a permutation (0 even, 1 odd).
pub fn permutation_parity(p: &[usize]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    (transpositions % 2) as u32
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let body: Vec<String> = cycle.iter().map(usize::to_string).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A subgroup, carrying both its member indices in the parent and its own
/// Cayley table (members in ascending parent order).
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    local: Vec<Option<usize>>,
    group: Arc<FiniteGroup>,
}

impl Subgroup {
    pub fn new(parent: Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>, name: impl Into<String>) -> Result<Self> {
        let members: Vec<usize> = members.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = parent.order();
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::NotSubgroup(format!("index {bad} out of range")));
        }
        let mut local = vec![None; n];
        for (li, &m) in members.iter().enumerate() {
            local[m] = Some(li);
        }
        if local[parent.identity()].is_none() {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let k = members.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &members {
            for &b in &members {
                match local[parent.mul(a, b)] {
                    Some(l) => table.push(l),
                    None => {
                        return Err(Error::NotSubgroup(format!(
                            "{}·{} = {} is not a member",
                            parent.label(a),
                            parent.label(b),
                            parent.label(parent.mul(a, b))
                        )))
                    }
                }
            }
        }
        let labels = members.iter().map(|&m| parent.label(m).to_string()).collect();
        let identity = local[parent.identity()];
        let group = FiniteGroup::from_flat(name.into(), labels, table, identity, Exec::Sequential)?;
        Ok(Subgroup { parent, members, local, group: Arc::new(group) })
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        let name = parent.name().to_string();
        Subgroup::new(parent.clone(), 0..parent.order(), name).expect("whole group")
    }

    /// The same member set inside another group on the same underlying set
    /// (e.g. `K ⊂ G_χ`). The subgroup table must agree; the local group is
    /// shared.
    pub fn reparent(&self, new_parent: Arc<FiniteGroup>) -> Result<Self> {
        if new_parent.order() != self.parent.order() {
            return Err(Error::GroupMismatch);
        }
        for (la, &a) in self.members.iter().enumerate() {
            for (lb, &b) in self.members.iter().enumerate() {
                if self.local[new_parent.mul(a, b)] != Some(self.group.mul(la, lb)) {
                    return Err(Error::NotSubgroup("multiplication differs in the new parent".into()));
                }
            }
        }
        Ok(Subgroup { parent: new_parent, members: self.members.clone(), local: self.local.clone(), group: self.group.clone() })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.local[i].is_some()
    }

    pub fn local_index(&self, i: usize) -> Option<usize> {
        self.local[i]
    }

    /// A pair `(g, k)` with `g k g⁻¹ ∉ K`, if one exists.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        (0..self.parent.order())
            .find_map(|g| self.members.iter().find(|&&k| !self.contains(self.parent.conj(g, k))).map(|&k| (g, k)))
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    /// Permutation (in local indices) induced on `K` by conjugation with `g`.
    pub fn conjugation(&self, g: usize) -> Option<Vec<usize>> {
        self.members.iter().map(|&k| self.local[self.parent.conj(g, k)]).collect()
    }
}

/// `χ : G → μ_n`, stored as exponents: `χ(gᵢ) = e^(2πi·exponents[i]/n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    order: u32,
    exponents: Vec<u32>,
}

impl Character {
    pub fn new(group: &FiniteGroup, order: u32, exponents: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidCharacter("order must be positive".into()));
        }
        if exponents.len() != group.order() {
            return Err(Error::InvalidCharacter(format!(
                "{} exponents for a group of order {}",
                exponents.len(),
                group.order()
            )));
        }
        let exponents: Vec<u32> = exponents.iter().map(|&e| e.rem_euclid(order as i64) as u32).collect();
        let chi = Character { order, exponents };
        chi.check_on(group)?;
        Ok(chi)
    }

    pub fn trivial(group: &FiniteGroup, order: u32) -> Self {
        Character { order, exponents: vec![0; group.order()] }
    }

    /// Verify the homomorphism property on `group`.
    pub fn check_on(&self, group: &FiniteGroup) -> Result<()> {
        let n = self.order;
        if self.exponents.len() != group.order() {
            return Err(Error::InvalidCharacter("length does not match group order".into()));
        }
        if self.exponents[group.identity()] != 0 {
            return Err(Error::InvalidCharacter("identity has nonzero exponent".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if self.exponents[group.mul(a, b)] != (self.exponents[a] + self.exponents[b]) % n {
                    return Err(Error::InvalidCharacter(format!(
                        "not a homomorphism at ({}, {})",
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents[i]
    }

    pub fn value(&self, i: usize) -> C64 {
        root_of_unity(self.exponents[i] as i64, self.order)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `|Im χ|`.
    pub fn image_size(&self) -> usize {
        let g = self.exponents.iter().fold(self.order, |acc, &e| gcd(acc, e));
        (self.order / g) as usize
    }

    /// `χ⁻¹`, elementwise.
    pub fn inverse(&self) -> Character {
        let n = self.order;
        Character { order: n, exponents: self.exponents.iter().map(|&e| (n - e) % n).collect() }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `K = ker χ`, named `ker(<group>)`.
pub fn kernel(chi: &Character, group: &Arc<FiniteGroup>) -> Result<Subgroup> {
    chi.check_on(group)?;
    let members = (0..group.order()).filter(|&i| chi.exponent(i) == 0);
    let k = Subgroup::new(group.clone(), members, format!("ker({})", group.name()))?;
    debug_assert!(k.is_normal());
    Ok(k)
}

/// `μ_n → Aut(G)`, with `auts[k]` the permutation for `e^(2πik/n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicAction {
    order: u32,
    auts: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    WrongCount { expected: u32, found: usize },
    WrongLength { k: usize, len: usize },
    NotPermutation { k: usize },
    FirstNotIdentity,
    IdentityMoved { k: usize },
    NotHomomorphism { k: usize, a: usize, b: usize },
    NotCompatible { a: usize, b: usize },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongCount { expected, found } => write!(f, "expected {expected} automorphisms, found {found}"),
            Self::WrongLength { k, len } => write!(f, "auts[{k}] has length {len}"),
            Self::NotPermutation { k } => write!(f, "auts[{k}] is not a permutation"),
            Self::FirstNotIdentity => write!(f, "auts[0] is not the identity"),
            Self::IdentityMoved { k } => write!(f, "auts[{k}] moves the identity"),
            Self::NotHomomorphism { k, a, b } => write!(f, "auts[{k}] is not a homomorphism at ({a}, {b})"),
            Self::NotCompatible { a, b } => write!(f, "auts[{a}]∘auts[{b}] ≠ auts[{}]", a + b),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CyclicAction {
    /// Structural constructor; use [`validate_action`] for the group checks.
    pub fn new(order: u32, auts: Vec<Vec<usize>>) -> Self {
        CyclicAction { order, auts }
    }

    pub fn trivial(group: &FiniteGroup, order: u32) -> Self {
        let id: Vec<usize> = (0..group.order()).collect();
        CyclicAction { order, auts: vec![id; order as usize] }
    }

    /// `auts[k] = φ^k`.
    pub fn from_generator(order: u32, phi: &[usize]) -> Self {
        let mut auts = Vec::with_capacity(order as usize);
        let mut cur: Vec<usize> = (0..phi.len()).collect();
        for _ in 0..order {
            let next = cur.iter().map(|&x| phi[x]).collect();
            auts.push(std::mem::replace(&mut cur, next));
        }
        CyclicAction { order, auts }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn auts(&self) -> &[Vec<usize>] {
        &self.auts
    }

    /// The automorphism for `e^(2πik/n)`, `k` taken mod `n`.
    pub fn aut(&self, k: i64) -> &[usize] {
        &self.auts[k.rem_euclid(self.order as i64) as usize]
    }

    pub fn apply(&self, k: i64, i: usize) -> usize {
        self.aut(k)[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.auts.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// `ψ ∘ auts[k] ∘ ψ⁻¹` for an automorphism `ψ`.
    pub fn conjugated(&self, psi: &[usize]) -> CyclicAction {
        let mut psi_inv = vec![0; psi.len()];
        for (i, &p) in psi.iter().enumerate() {
            psi_inv[p] = i;
        }
        let auts = self.auts.iter().map(|a| (0..psi.len()).map(|x| psi[a[psi_inv[x]]]).collect()).collect();
        CyclicAction { order: self.order, auts }
    }
}

/// Every automorphism/homomorphism violation of `act` on `group`.
pub fn validate_action(act: &CyclicAction, group: &FiniteGroup) -> ActionReport {
    let n = group.order();
    let mut violations = Vec::new();
    if act.auts.len() != act.order as usize || act.order == 0 {
        violations.push(ActionViolation::WrongCount { expected: act.order, found: act.auts.len() });
        return ActionReport { violations };
    }
    let mut shape_ok = true;
    for (k, p) in act.auts.iter().enumerate() {
        if p.len() != n {
            violations.push(ActionViolation::WrongLength { k, len: p.len() });
            shape_ok = false;
        } else if !is_permutation(p) {
            violations.push(ActionViolation::NotPermutation { k });
            shape_ok = false;
        }
    }
    if !shape_ok {
        return ActionReport { violations };
    }
    if act.auts[0].iter().enumerate().any(|(i, &x)| i != x) {
        violations.push(ActionViolation::FirstNotIdentity);
    }
    for (k, p) in act.auts.iter().enumerate() {
        if p[group.identity()] != group.identity() {
            violations.push(ActionViolation::IdentityMoved { k });
        }
        let witness = (0..n).find_map(|a| (0..n).find(|&b| p[group.mul(a, b)] != group.mul(p[a], p[b])).map(|b| (a, b)));
        if let Some((a, b)) = witness {
            violations.push(ActionViolation::NotHomomorphism { k, a, b });
        }
    }
    let m = act.order as usize;
    for a in 0..m {
        for b in 0..m {
            let target = &act.auts[(a + b) % m];
            if (0..n).any(|x| act.auts[a][act.auts[b][x]] != target[x]) {
                violations.push(ActionViolation::NotCompatible { a, b });
            }
        }
    }
    ActionReport { violations }
}

/// First `(element, k)` with `χ(auts[k](element)) ≠ χ(element)`.
pub fn star_violation(chi: &Character, act: &CyclicAction) -> Result<Option<(usize, usize)>> {
    if chi.order() != act.order() {
        return Err(Error::OrderMismatch { character: chi.order(), action: act.order() });
    }
    if act.auts.len() != act.order as usize || act.auts.iter().any(|p| p.len() != chi.exponents.len()) {
        return Err(Error::InvalidAction("action and character are defined on different groups".into()));
    }
    Ok(act.auts.iter().enumerate().find_map(|(k, p)| {
        (0..p.len()).find(|&i| chi.exponents[p[i]] != chi.exponents[i]).map(|i| (i, k))
    }))
}

/// `χ(g^λ) = χ(g)` for every `g` and every `λ ∈ μ_n`.
pub fn check_star(chi: &Character, act: &CyclicAction) -> Result<bool> {
    Ok(star_violation(chi, act)?.is_none())
}

/// `Γ = G/K` with its projection and least-index lifts.
#[derive(Clone, Debug)]
pub struct QuotientData {
    projection: Vec<usize>,
    gamma: Arc<FiniteGroup>,
    lifts: Vec<usize>,
}

/// Cosets are numbered by their least element, so coset 0 holds index 0.
pub fn quotient(group: &Arc<FiniteGroup>, k: &Subgroup) -> Result<QuotientData> {
    if !Arc::ptr_eq(group, k.parent()) && **group != **k.parent() {
        return Err(Error::GroupMismatch);
    }
    if let Some((g, h)) = k.normality_witness() {
        return Err(Error::NotNormal(format!("{}·{}·{}⁻¹ ∉ K", group.label(g), group.label(h), group.label(g))));
    }
    let n = group.order();
    let mut projection = vec![usize::MAX; n];
    let mut lifts = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = lifts.len();
        lifts.push(x);
        for &m in k.members() {
            projection[group.mul(x, m)] = c;
        }
    }
    let m = lifts.len();
    let mut table = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            table[a * m + b] = projection[group.mul(lifts[a], lifts[b])];
        }
    }
    let labels = lifts.iter().map(|&l| format!("{}K", group.label(l))).collect();
    let identity = projection[group.identity()];
    let gamma = FiniteGroup::from_flat(format!("{}/{}", group.name(), k.group().name()), labels, table, Some(identity), Exec::Sequential)?;
    Ok(QuotientData { projection, gamma: Arc::new(gamma), lifts })
}

impl QuotientData {
    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn lifts(&self) -> &[usize] {
        &self.lifts
    }

    pub fn lift(&self, gamma: usize) -> usize {
        self.lifts[gamma]
    }

    /// Every lift of `gamma` (the whole coset), ascending.
    pub fn coset(&self, gamma: usize) -> Vec<usize> {
        (0..self.projection.len()).filter(|&g| self.projection[g] == gamma).collect()
    }
}
