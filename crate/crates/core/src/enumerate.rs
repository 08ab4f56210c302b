//! The test universe: small groups, their additive endomorphisms, and every
//! left near-ring on a given group.
//!
//! For a left near-ring each row `y ↦ xy` of the multiplication table is an
//! additive endomorphism, so a multiplication is a choice of one endomorphism
//! `E(x)` per element. Associativity then reads `E(x) ∘ E(y) = E(E(x)(y))`.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{validate_near_ring, CayleyTable, Element, NearRing, StructureError};

/// Largest order the exhaustive enumerators accept.
pub const MAX_ENUMERATION_ORDER: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("order {0} is outside the supported range 1..={MAX_ENUMERATION_ORDER}")]
    OrderOutOfRange(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
}

/// A finite group written additively, identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: CayleyTable,
    label: String,
}

impl GroupTable {
    pub fn new(table: CayleyTable, label: impl Into<String>) -> Result<Self, EnumerationError> {
        let n = table.order();
        for x in 0..n {
            if table.get(0, x) != x || table.get(x, 0) != x {
                return Err(EnumerationError::NotAGroup(format!("0 is not an identity for {x}")));
            }
            if !(0..n).any(|y| table.get(x, y) == 0 && table.get(y, x) == 0) {
                return Err(EnumerationError::NotAGroup(format!("{x} has no inverse")));
            }
        }
        for (x, y, z) in itertools::iproduct!(0..n, 0..n, 0..n) {
            if table.get(table.get(x, y), z) != table.get(x, table.get(y, z)) {
                return Err(EnumerationError::NotAGroup(format!(
                    "not associative at ({x},{y},{z})"
                )));
            }
        }
        Ok(Self {
            table,
            label: label.into(),
        })
    }

    /// `Z_n` with `a + b = (a + b) mod n`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            table: CayleyTable::from_fn(n, |a, b| (a + b) % n),
            label: format!("Z{n}"),
        }
    }

    /// `G × H`, pair `(g, h)` labelled `g * |H| + h`.
    pub fn direct_product(g: &GroupTable, h: &GroupTable) -> Self {
        let m = h.order();
        let table = CayleyTable::from_fn(g.order() * m, |a, b| {
            g.table.get(a / m, b / m) * m + h.table.get(a % m, b % m)
        });
        Self {
            table,
            label: format!("{}x{}", g.label, h.label),
        }
    }

    pub fn klein_four() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    /// The symmetric group on three points, as permutation composition.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let table = CayleyTable::from_fn(6, |a, b| {
            let (p, q) = (perms[a], perms[b]);
            index([p[q[0]], p[q[1]], p[q[2]]])
        });
        Self {
            table,
            label: "S3".into(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn op(&self, a: Element, b: Element) -> Element {
        self.table.get(a, b)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, x: Element) -> usize {
        let mut k = 1;
        let mut acc = x;
        while acc != 0 {
            acc = self.op(acc, x);
            k += 1;
        }
        k
    }

    /// Greedy generating set: each generator is the smallest element not yet
    /// in the subgroup spanned by the previous ones.
    pub fn generators(&self) -> Vec<Element> {
        let n = self.order();
        let mut gens = Vec::new();
        let mut span = vec![false; n];
        span[0] = true;
        for x in 1..n {
            if span[x] {
                continue;
            }
            gens.push(x);
            let mut queue: Vec<Element> = (0..n).filter(|&e| span[e]).collect();
            while let Some(e) = queue.pop() {
                for &s in &gens {
                    let f = self.op(e, s);
                    if !span[f] {
                        span[f] = true;
                        queue.push(f);
                    }
                }
            }
        }
        gens
    }
}

/// Conventional name for a group of order at most 8.
fn identify_group(g: &GroupTable) -> Option<String> {
    let n = g.order();
    let orders: Vec<usize> = (0..n).map(|x| g.element_order(x)).collect();
    let exponent = orders.iter().copied().max().unwrap_or(1);
    if exponent == n {
        return Some(format!("Z{n}"));
    }
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let name = match (n, g.is_abelian(), exponent, involutions) {
        (4, true, 2, _) => "Z2xZ2",
        (6, false, _, _) => "S3",
        (8, true, 4, _) => "Z4xZ2",
        (8, true, 2, _) => "Z2xZ2xZ2",
        (8, false, _, 5) => "D4",
        (8, false, _, 1) => "Q8",
        _ => return None,
    };
    Some(name.to_string())
}

/// Lexicographically smallest relabelling of `table` over bijections fixing 0,
/// together with every bijection that attains it.
pub(crate) fn canonical_relabelings(table: &CayleyTable) -> (Vec<Element>, Vec<Vec<Element>>) {
    let n = table.order();
    let mut best: Option<Vec<Element>> = None;
    let mut attaining: Vec<Vec<Element>> = Vec::new();
    let mut candidate = vec![0; n * n];
    for tail in (1..n).permutations(n - 1) {
        // perm maps old label -> new label
        let mut perm = Vec::with_capacity(n);
        perm.push(0);
        perm.extend(tail);
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let mut ordering = std::cmp::Ordering::Equal;
        for i in 0..n {
            for j in 0..n {
                let v = perm[table.get(inv[i], inv[j])];
                candidate[i * n + j] = v;
                if ordering == std::cmp::Ordering::Equal {
                    if let Some(b) = &best {
                        ordering = v.cmp(&b[i * n + j]);
                    }
                }
            }
            if ordering == std::cmp::Ordering::Greater {
                break;
            }
        }
        match (&best, ordering) {
            (None, _) | (Some(_), std::cmp::Ordering::Less) => {
                best = Some(candidate.clone());
                attaining.clear();
                attaining.push(perm);
            }
            (Some(_), std::cmp::Ordering::Equal) => attaining.push(perm),
            _ => {}
        }
    }
    (best.expect("at least one permutation"), attaining)
}

/// All groups of order `n` up to isomorphism, in increasing canonical-table order.
pub fn enumerate_groups(n: usize) -> Result<Vec<GroupTable>, EnumerationError> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(EnumerationError::OrderOutOfRange(n));
    }
    let mut canonical: BTreeSet<Vec<Element>> = BTreeSet::new();
    for k in (1..=n).filter(|&k| n.is_multiple_of(k) && (k > 1 || n == 1)) {
        let mut search = GroupSearch::new(n, k);
        search.run(0);
        for entries in &search.found {
            let table = CayleyTable::from_fn(n, |a, b| entries[a * n + b]);
            canonical.insert(canonical_relabelings(&table).0);
        }
    }
    let groups = canonical
        .into_iter()
        .enumerate()
        .map(|(k, entries)| {
            let table = CayleyTable::from_fn(n, |a, b| entries[a * n + b]);
            let mut g = GroupTable {
                table,
                label: String::new(),
            };
            g.label = identify_group(&g).unwrap_or_else(|| format!("G{n}_{k}"));
            g
        })
        .collect();
    Ok(groups)
}

const UNSET: usize = usize::MAX;

/// Cell-by-cell backtracking over Latin squares with identity 0, checking
/// associativity on every triple that becomes fully determined.
///
/// Labels are restricted so that element 1 has the largest element order
/// `k` and `1 + i = i + 1` for `i < k - 1`: every group admits such a
/// labelling, and it removes most relabelled copies from the search.
struct GroupSearch {
    n: usize,
    k: usize,
    t: Vec<usize>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    found: Vec<Vec<usize>>,
}

impl GroupSearch {
    fn new(n: usize, k: usize) -> Self {
        let mut t = vec![UNSET; n * n];
        let mut row_used = vec![0u32; n];
        let mut col_used = vec![0u32; n];
        for a in 0..n {
            t[a] = a;
            t[a * n] = a;
            row_used[a] |= 1 << a;
            col_used[a] |= 1 << a;
            row_used[0] |= 1 << a;
            col_used[0] |= 1 << a;
        }
        Self {
            n,
            k,
            t,
            row_used,
            col_used,
            found: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> usize {
        self.t[a * self.n + b]
    }

    /// Checks every associativity instance that involves cell (a, b).
    fn consistent(&self, a: usize, b: usize) -> bool {
        let n = self.n;
        let assoc = |x: usize, y: usize, z: usize| -> bool {
            let xy = self.get(x, y);
            let yz = self.get(y, z);
            if xy == UNSET || yz == UNSET {
                return true;
            }
            let l = self.get(xy, z);
            let r = self.get(x, yz);
            l == UNSET || r == UNSET || l == r
        };
        for z in 0..n {
            // (a b) z = a (b z)
            if !assoc(a, b, z) {
                return false;
            }
            // z a b: (z a) b = z (a b)
            if !assoc(z, a, b) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                // c appears as an outer product
                if self.get(x, y) == a && !assoc(x, y, b) {
                    return false;
                }
                if self.get(x, y) == b && !assoc(a, x, y) {
                    return false;
                }
            }
        }
        true
    }

    fn max_element_order(&self) -> usize {
        (0..self.n)
            .map(|x| {
                let mut k = 1;
                let mut acc = x;
                while acc != 0 {
                    acc = self.get(acc, x);
                    k += 1;
                }
                k
            })
            .max()
            .unwrap_or(1)
    }

    fn run(&mut self, cell: usize) {
        let n = self.n;
        let m = n - 1;
        if cell == m * m {
            if self.max_element_order() == self.k {
                self.found.push(self.t.clone());
            }
            return;
        }
        let a = 1 + cell / m;
        let b = 1 + cell % m;
        let forced = match (a, b) {
            (1, b) if b + 1 < self.k => Some(b + 1),
            (1, b) if b + 1 == self.k => Some(0),
            _ => None,
        };
        for v in 0..n {
            if forced.is_some_and(|f| f != v) {
                continue;
            }
            let bit = 1 << v;
            if self.row_used[a] & bit != 0 || self.col_used[b] & bit != 0 {
                continue;
            }
            self.t[a * n + b] = v;
            self.row_used[a] |= bit;
            self.col_used[b] |= bit;
            if self.consistent(a, b) {
                self.run(cell + 1);
            }
            self.row_used[a] &= !bit;
            self.col_used[b] &= !bit;
            self.t[a * n + b] = UNSET;
        }
    }
}

/// An additive endomorphism of a group, as its image list.
pub type EndoMap = Vec<Element>;

/// Every map `e` with `e(a + b) = e(a) + e(b)`, in lexicographic image order.
/// Images of a generating set are chosen freely and extended along words.
pub fn additive_endomorphisms(g: &GroupTable) -> Vec<EndoMap> {
    let n = g.order();
    let gens = g.generators();
    let mut out = Vec::new();
    for images in (0..gens.len()).map(|_| 0..n).multi_cartesian_product() {
        if let Some(e) = extend_from_generators(g, &gens, &images) {
            out.push(e);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn extend_from_generators(g: &GroupTable, gens: &[Element], images: &[Element]) -> Option<EndoMap> {
    let n = g.order();
    let mut e = vec![UNSET; n];
    e[0] = 0;
    let mut queue = vec![0];
    while let Some(a) = queue.pop() {
        for (&s, &img) in gens.iter().zip(images) {
            let b = g.op(a, s);
            let want = g.op(e[a], img);
            if e[b] == UNSET {
                e[b] = want;
                queue.push(b);
            } else if e[b] != want {
                return None;
            }
        }
    }
    let hom = (0..n).all(|a| (0..n).all(|b| e[g.op(a, b)] == g.op(e[a], e[b])));
    hom.then_some(e)
}

/// Options for [`enumerate_nearrings_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct NearRingSearch {
    /// Keep one representative per isomorphism class (bijections fixing 0).
    pub up_to_isomorphism: bool,
}

/// Every left near-ring on `g`, raw (fixed labels).
pub fn enumerate_nearrings(g: &GroupTable) -> Vec<NearRing> {
    enumerate_nearrings_with(g, NearRingSearch::default())
}

pub fn enumerate_nearrings_with(g: &GroupTable, opts: NearRingSearch) -> Vec<NearRing> {
    let endos = additive_endomorphisms(g);
    let n = g.order();
    let rows: Vec<Vec<usize>> = if n == 1 {
        vec![vec![0]]
    } else {
        // Partition on the endomorphism chosen for row 0.
        (0..endos.len())
            .into_par_iter()
            .map(|first| {
                let mut search = RowSearch {
                    endos: &endos,
                    choice: vec![UNSET; n],
                    found: Vec::new(),
                };
                search.choice[0] = first;
                if search.consistent(0) {
                    search.run(1);
                }
                search.found
            })
            .flatten()
            .collect()
    };

    let mut out = Vec::with_capacity(rows.len());
    let mut seen: BTreeSet<Vec<Element>> = BTreeSet::new();
    let perms = if opts.up_to_isomorphism {
        canonical_relabelings(g.table()).1
    } else {
        Vec::new()
    };
    for (k, choice) in rows.iter().enumerate() {
        let mul = CayleyTable::from_fn(n, |a, b| endos[choice[a]][b]);
        if opts.up_to_isomorphism {
            let key = perms
                .iter()
                .map(|p| mul.relabel(p).entries().to_vec())
                .min()
                .expect("identity-attaining relabeling exists");
            if !seen.insert(key) {
                continue;
            }
        }
        let nr = validate_near_ring(g.table().clone(), mul)
            .expect("row search yields near-rings")
            .with_name(format!("{}_nr{:04}", g.label(), k));
        out.push(nr);
    }
    out
}

struct RowSearch<'a> {
    endos: &'a [EndoMap],
    choice: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl RowSearch<'_> {
    fn row(&self, x: usize) -> Option<&EndoMap> {
        match self.choice[x] {
            UNSET => None,
            i => Some(&self.endos[i]),
        }
    }

    /// Checks `E(x)∘E(y) = E(E(x)(y))` for every pair that became decidable
    /// when row `v` was assigned.
    fn consistent(&self, v: usize) -> bool {
        for x in 0..=v {
            let ex = self.row(x).expect("rows assigned in order");
            for y in 0..=v {
                let w = ex[y];
                if w > v || (x != v && y != v && w != v) {
                    continue;
                }
                let ey = self.row(y).expect("assigned");
                let ew = self.row(w).expect("assigned");
                if ey.iter().zip(ew).any(|(&yz, &wz)| ex[yz] != wz) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, v: usize) {
        if v == self.choice.len() {
            self.found.push(self.choice.clone());
            return;
        }
        for i in 0..self.endos.len() {
            self.choice[v] = i;
            if self.consistent(v) {
                self.run(v + 1);
            }
        }
        self.choice[v] = UNSET;
    }
}

/// The ring `Z_n`.
pub fn build_ring_zn(n: usize) -> NearRing {
    let add = CayleyTable::from_fn(n, |a, b| (a + b) % n);
    let mul = CayleyTable::from_fn(n, |a, b| (a * b) % n);
    validate_near_ring(add, mul)
        .expect("Z_n is a ring")
        .with_name(format!("Z{n}_RING"))
}

/// Zero multiplication on `g`.
pub fn build_zero_mul(g: &GroupTable) -> NearRing {
    let mul = CayleyTable::from_fn(g.order(), |_, _| 0);
    validate_near_ring(g.table().clone(), mul)
        .expect("zero multiplication is a near-ring")
        .with_name(format!("{}_ZERO", g.label()))
}

/// `x·y = y` on `g`: not zero-symmetric once `g` is nontrivial.
pub fn build_right_projection(g: &GroupTable) -> NearRing {
    let mul = CayleyTable::from_fn(g.order(), |_, b| b);
    validate_near_ring(g.table().clone(), mul)
        .expect("right projection is a near-ring")
        .with_name(format!("{}_RPROJ", g.label()))
}

/// Zero multiplication and right projection on every group of order `n`,
/// plus the ring `Z_n`.
pub fn constructed_families(n: usize) -> Result<Vec<NearRing>, EnumerationError> {
    let groups = enumerate_groups(n)?;
    let mut out: Vec<NearRing> = groups.iter().map(build_zero_mul).collect();
    out.push(build_ring_zn(n));
    out.extend(groups.iter().map(build_right_projection));
    Ok(out)
}

/// All raw near-rings on all groups of each order in `orders`.
pub fn catalog(orders: std::ops::RangeInclusive<usize>) -> Result<Vec<NearRing>, StructureCatalogError> {
    let mut out = Vec::new();
    for n in orders {
        for g in enumerate_groups(n)? {
            out.extend(enumerate_nearrings(&g));
        }
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum StructureCatalogError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_counts(n: usize) -> usize {
        enumerate_groups(n).unwrap().len()
    }

    #[test]
    fn small_group_counts() {
        assert_eq!(group_counts(1), 1);
        assert_eq!(group_counts(2), 1);
        assert_eq!(group_counts(3), 1);
        assert_eq!(group_counts(4), 2);
        assert_eq!(group_counts(5), 1);
    }

    #[test]
    fn order_six_has_a_nonabelian_group() {
        let groups = enumerate_groups(6).unwrap();
        let labels: Vec<_> = groups.iter().map(GroupTable::label).collect();
        assert_eq!(groups.len(), 2);
        assert!(labels.contains(&"Z6") && labels.contains(&"S3"));
        assert!(groups.iter().any(|g| !g.is_abelian()));
    }

    #[test]
    fn order_out_of_range() {
        assert_eq!(enumerate_groups(0), Err(EnumerationError::OrderOutOfRange(0)));
        assert_eq!(enumerate_groups(9), Err(EnumerationError::OrderOutOfRange(9)));
    }

    #[test]
    fn endomorphism_counts() {
        assert_eq!(additive_endomorphisms(&GroupTable::cyclic(2)).len(), 2);
        assert_eq!(additive_endomorphisms(&GroupTable::cyclic(3)).len(), 3);
        assert_eq!(additive_endomorphisms(&GroupTable::klein_four()).len(), 16);
        assert_eq!(additive_endomorphisms(&GroupTable::symmetric3()).len(), 10);
        assert_eq!(additive_endomorphisms(&GroupTable::cyclic(1)), vec![vec![0]]);
    }

    #[test]
    fn endomorphisms_match_brute_force_on_klein_four() {
        let g = GroupTable::klein_four();
        let brute: Vec<EndoMap> = (0..4)
            .map(|_| 0..4)
            .multi_cartesian_product()
            .filter(|e| (0..4).all(|a| (0..4).all(|b| e[g.op(a, b)] == g.op(e[a], e[b]))))
            .collect();
        assert_eq!(additive_endomorphisms(&g), brute);
    }

    #[test]
    fn near_rings_on_small_groups() {
        assert_eq!(enumerate_nearrings(&GroupTable::cyclic(1)).len(), 1);
        assert_eq!(enumerate_nearrings(&GroupTable::cyclic(2)).len(), 3);
    }

    #[test]
    fn constructors() {
        let g2 = GroupTable::cyclic(2);
        assert!(!build_right_projection(&g2).is_zero_symmetric());
        let s3 = build_zero_mul(&GroupTable::symmetric3());
        assert!(!s3.is_3_prime());
        assert_eq!(s3.center(), (0..6).collect::<Vec<_>>());
        let z5 = build_ring_zn(5);
        assert!(z5.is_3_prime() && z5.is_commutative_ring());
    }

    #[test]
    fn symmetric3_is_a_group() {
        let s3 = GroupTable::symmetric3();
        assert!(GroupTable::new(s3.table().clone(), "S3").is_ok());
        assert!(!s3.is_abelian());
    }

    #[test]
    fn up_to_isomorphism_collapses_z2_duplicates() {
        let g = GroupTable::klein_four();
        let raw = enumerate_nearrings(&g).len();
        let iso = enumerate_nearrings_with(&g, NearRingSearch { up_to_isomorphism: true }).len();
        assert!(iso < raw);
        // Z_2 has only the trivial automorphism
        let z2 = enumerate_nearrings_with(&GroupTable::cyclic(2), NearRingSearch { up_to_isomorphism: true });
        assert_eq!(z2.len(), 3);
    }
}
