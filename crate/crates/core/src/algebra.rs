//! Finite left near-rings given by Cayley tables.
//!
//! Elements are indices `0..n`, and index 0 is always the additive identity.
//! Addition is a group operation that need not be commutative. Multiplication
//! is associative and distributes over addition from the left only:
//! `x(y + z) = xy + xz`.

use std::fmt;

use thiserror::Error;

/// An element of a finite structure, by table index.
pub type Element = usize;

/// Full operation table of a binary operation on `0..order`, row-major
/// (row index is the left operand).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyTable {
    order: usize,
    entries: Vec<Element>,
}

impl CayleyTable {
    /// Builds a table from rows, checking squareness and closure.
    pub fn from_rows(rows: &[Vec<Element>]) -> Result<Self, StructureError> {
        let order = rows.len();
        if order == 0 {
            return Err(StructureError::Empty);
        }
        let mut entries = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(StructureError::NotSquare {
                    row: r,
                    len: row.len(),
                    order,
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(StructureError::OutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        order,
                    });
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { order, entries })
    }

    /// Builds a table from a closure. Panics if an entry is out of range.
    pub fn from_fn(order: usize, mut f: impl FnMut(Element, Element) -> Element) -> Self {
        assert!(order > 0, "empty table");
        let mut entries = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let v = f(a, b);
                assert!(v < order, "entry ({a},{b}) = {v} out of range");
                entries.push(v);
            }
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, a: Element, b: Element) -> Element {
        self.entries[a * self.order + b]
    }

    pub fn row(&self, a: Element) -> &[Element] {
        &self.entries[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.entries.chunks(self.order).map(<[_]>::to_vec).collect()
    }

    pub(crate) fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// The table after renaming every element `e` to `perm[e]`.
    pub fn relabel(&self, perm: &[Element]) -> Self {
        let n = self.order;
        let mut entries = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[perm[a] * n + perm[b]] = perm[self.get(a, b)];
            }
        }
        Self { order: n, entries }
    }
}

/// Axiom checked by [`validate_near_ring`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    AdditiveIdentity,
    AdditiveAssociativity,
    AdditiveInverse,
    MultiplicativeAssociativity,
    LeftDistributivity,
    /// `x·0 = 0`, implied by the others when they hold.
    RightZero,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::AdditiveIdentity => "0 is not the additive identity",
            Axiom::AdditiveAssociativity => "add not associative",
            Axiom::AdditiveInverse => "missing additive inverse",
            Axiom::MultiplicativeAssociativity => "mul not associative",
            Axiom::LeftDistributivity => "not left distributive",
            Axiom::RightZero => "x*0 != 0",
        })
    }
}

/// One failed axiom instance. The witness lists the elements substituted
/// for the axiom's variables in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}", self.axiom, self.witness)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row},{col}) = {value} is out of range for order {order}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("order mismatch: add has order {add}, mul has order {mul}")]
    OrderMismatch { add: usize, mul: usize },
    #[error("{} axiom violation(s), first: {}", .0.len(), .0[0])]
    Violations(Vec<Violation>),
}

/// A validated finite left near-ring. Immutable once built.
#[derive(Clone, Debug)]
pub struct NearRing {
    name: Option<String>,
    add: CayleyTable,
    mul: CayleyTable,
    neg: Vec<Element>,
}

impl PartialEq for NearRing {
    fn eq(&self, other: &Self) -> bool {
        self.add == other.add && self.mul == other.mul
    }
}

impl Eq for NearRing {}

/// Checks every near-ring axiom and reports all violations, not just the first.
pub fn validate_near_ring(add: CayleyTable, mul: CayleyTable) -> Result<NearRing, StructureError> {
    let n = add.order();
    if mul.order() != n {
        return Err(StructureError::OrderMismatch {
            add: n,
            mul: mul.order(),
        });
    }
    let mut violations = Vec::new();
    let mut push = |axiom, witness: Vec<Element>| violations.push(Violation { axiom, witness });

    for x in 0..n {
        if add.get(0, x) != x || add.get(x, 0) != x {
            push(Axiom::AdditiveIdentity, vec![x]);
        }
    }
    for x in 0..n {
        if !(0..n).any(|y| add.get(x, y) == 0 && add.get(y, x) == 0) {
            push(Axiom::AdditiveInverse, vec![x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if add.get(add.get(x, y), z) != add.get(x, add.get(y, z)) {
                    push(Axiom::AdditiveAssociativity, vec![x, y, z]);
                }
                if mul.get(mul.get(x, y), z) != mul.get(x, mul.get(y, z)) {
                    push(Axiom::MultiplicativeAssociativity, vec![x, y, z]);
                }
                if mul.get(x, add.get(y, z)) != add.get(mul.get(x, y), mul.get(x, z)) {
                    push(Axiom::LeftDistributivity, vec![x, y, z]);
                }
            }
        }
    }
    for x in 0..n {
        if mul.get(x, 0) != 0 {
            push(Axiom::RightZero, vec![x]);
        }
    }

    if !violations.is_empty() {
        return Err(StructureError::Violations(violations));
    }
    let neg = (0..n)
        .map(|x| (0..n).find(|&y| add.get(x, y) == 0).expect("inverse checked"))
        .collect();
    Ok(NearRing {
        name: None,
        add,
        mul,
        neg,
    })
}

/// Record of the structural predicates used as theorem conclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralPredicates {
    pub abelian_addition: bool,
    pub commutative_mul: bool,
    pub right_distributive: bool,
    pub is_commutative_ring: bool,
    pub zero_symmetric: bool,
    pub three_prime: bool,
    pub two_torsion_free: bool,
}

impl NearRing {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.add.order()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    pub fn add_table(&self) -> &CayleyTable {
        &self.add
    }

    pub fn mul_table(&self) -> &CayleyTable {
        &self.mul
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        self.add.get(a, b)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul.get(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        self.neg[a]
    }

    /// `a - b`, read as `a + (-b)` whether or not addition commutes.
    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// Lie product `xy - yx`.
    pub fn lie(&self, x: Element, y: Element) -> Element {
        self.sub(self.mul(x, y), self.mul(y, x))
    }

    /// Jordan product `xy + yx`.
    pub fn jordan(&self, x: Element, y: Element) -> Element {
        self.add(self.mul(x, y), self.mul(y, x))
    }

    pub fn is_zero_symmetric(&self) -> bool {
        self.mul.row(0).iter().all(|&v| v == 0)
    }

    /// A nonzero pair `(x, y)` with `x t y = 0` for every `t`, if one exists.
    /// Pairs are scanned with `x` major.
    pub fn three_prime_witness(&self) -> Option<(Element, Element)> {
        let n = self.order();
        for x in 1..n {
            for y in 1..n {
                if (0..n).all(|t| self.mul(self.mul(x, t), y) == 0) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_3_prime(&self) -> bool {
        self.three_prime_witness().is_none()
    }

    pub fn is_2_torsion_free(&self) -> bool {
        self.elements().skip(1).all(|x| self.add(x, x) != 0)
    }

    pub fn in_center(&self, x: Element) -> bool {
        self.elements().all(|y| self.mul(x, y) == self.mul(y, x))
    }

    /// Membership mask of the multiplicative center. May be all false.
    pub fn center_mask(&self) -> Vec<bool> {
        self.elements().map(|x| self.in_center(x)).collect()
    }

    pub fn center(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.in_center(x)).collect()
    }

    /// First pair with `x + y != y + x`.
    pub fn addition_commutator_witness(&self) -> Option<(Element, Element)> {
        let n = self.order();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.add(x, y) != self.add(y, x))
    }

    pub fn is_abelian_addition(&self) -> bool {
        self.addition_commutator_witness().is_none()
    }

    /// First pair with `xy != yx`.
    pub fn multiplication_commutator_witness(&self) -> Option<(Element, Element)> {
        let n = self.order();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| self.mul(x, y) != self.mul(y, x))
    }

    pub fn is_commutative_mul(&self) -> bool {
        self.multiplication_commutator_witness().is_none()
    }

    /// First triple with `(x + y)z != xz + yz`.
    pub fn right_distributive_witness(&self) -> Option<(Element, Element, Element)> {
        let n = self.order();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.mul(self.add(x, y), z) != self.add(self.mul(x, z), self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_right_distributive(&self) -> bool {
        self.right_distributive_witness().is_none()
    }

    /// Abelian addition, commutative multiplication, and both distributive laws.
    pub fn is_commutative_ring(&self) -> bool {
        self.commutative_ring_failure().is_none()
    }

    /// Describes why the structure is not a commutative ring, if it is not.
    pub fn commutative_ring_failure(&self) -> Option<String> {
        if let Some((x, y)) = self.addition_commutator_witness() {
            return Some(format!("addition not abelian: {x}+{y} != {y}+{x}"));
        }
        if let Some((x, y)) = self.multiplication_commutator_witness() {
            return Some(format!("multiplication not commutative: {x}*{y} != {y}*{x}"));
        }
        if let Some((x, y, z)) = self.right_distributive_witness() {
            return Some(format!("not right distributive: ({x}+{y})*{z} != {x}*{z}+{y}*{z}"));
        }
        None
    }

    /// Some nonzero `x` with `xz = 0` or `zx = 0`.
    pub fn zero_divisor_partner(&self, z: Element) -> Option<Element> {
        self.elements()
            .skip(1)
            .find(|&x| self.mul(x, z) == 0 || self.mul(z, x) == 0)
    }

    pub fn is_zero_divisor(&self, z: Element) -> bool {
        self.zero_divisor_partner(z).is_some()
    }

    /// Smallest two-sided multiplicative semigroup ideal containing `a`:
    /// `{a} ∪ Na ∪ aN ∪ NaN`, returned sorted.
    pub fn principal_semigroup_ideal(&self, a: Element) -> Vec<Element> {
        let mut member = vec![false; self.order()];
        member[a] = true;
        for s in self.elements() {
            let sa = self.mul(s, a);
            member[sa] = true;
            member[self.mul(a, s)] = true;
            for t in self.elements() {
                member[self.mul(sa, t)] = true;
            }
        }
        self.elements().filter(|&x| member[x]).collect()
    }

    /// A nonzero semigroup ideal contained in the center, if any.
    /// Only principal ideals of central elements need to be tried: any
    /// nonzero ideal inside the center contains a nonzero principal one.
    pub fn semigroup_ideal_in_center(&self) -> Option<Vec<Element>> {
        let center = self.center_mask();
        self.elements()
            .skip(1)
            .filter(|&a| center[a])
            .map(|a| self.principal_semigroup_ideal(a))
            .find(|ideal| ideal.iter().all(|&x| center[x]))
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        let abelian_addition = self.is_abelian_addition();
        let commutative_mul = self.is_commutative_mul();
        let right_distributive = self.is_right_distributive();
        StructuralPredicates {
            abelian_addition,
            commutative_mul,
            right_distributive,
            is_commutative_ring: abelian_addition && commutative_mul && right_distributive,
            zero_symmetric: self.is_zero_symmetric(),
            three_prime: self.is_3_prime(),
            two_torsion_free: self.is_2_torsion_free(),
        }
    }

    /// Relabels elements by `perm` (which must fix 0).
    pub fn relabel(&self, perm: &[Element]) -> NearRing {
        debug_assert_eq!(perm[0], 0);
        let mut neg = vec![0; self.order()];
        for x in self.elements() {
            neg[perm[x]] = perm[self.neg[x]];
        }
        NearRing {
            name: self.name.clone(),
            add: self.add.relabel(perm),
            mul: self.mul.relabel(perm),
            neg,
        }
    }
}

impl fmt::Display for NearRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => write!(f, "{name} (order {})", self.order()),
            None => write!(f, "<unnamed> (order {})", self.order()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn table(rows: &[&[usize]]) -> CayleyTable {
        CayleyTable::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn ring_z3_validates() {
        let add = CayleyTable::from_fn(3, |a, b| (a + b) % 3);
        let mul = CayleyTable::from_fn(3, |a, b| (a * b) % 3);
        assert!(validate_near_ring(add, mul).is_ok());
    }

    #[test]
    fn non_associative_order_two_is_rejected() {
        let add = table(&[&[0, 1], &[1, 0]]);
        let mul = table(&[&[0, 1], &[0, 0]]);
        let Err(StructureError::Violations(v)) = validate_near_ring(add, mul) else {
            panic!("expected violations");
        };
        assert!(v.contains(&Violation {
            axiom: Axiom::MultiplicativeAssociativity,
            witness: vec![1, 1, 1],
        }));
        assert!(v.iter().all(|v| v.axiom == Axiom::MultiplicativeAssociativity));
        assert_eq!(v[0].to_string(), "mul not associative at [1, 0, 1]");
    }

    #[test]
    fn zero_multiplication_validates() {
        for g in crate::enumerate::enumerate_groups(4).unwrap() {
            let n = g.order();
            let mul = CayleyTable::from_fn(n, |_, _| 0);
            assert!(validate_near_ring(g.table().clone(), mul).is_ok());
        }
    }

    #[test]
    fn shape_errors() {
        let add = table(&[&[0, 1], &[1, 0]]);
        let mul = CayleyTable::from_fn(3, |_, _| 0);
        assert_eq!(
            validate_near_ring(add, mul),
            Err(StructureError::OrderMismatch { add: 2, mul: 3 })
        );
        assert!(matches!(
            CayleyTable::from_rows(&[vec![0, 2], vec![1, 0]]),
            Err(StructureError::OutOfRange { value: 2, .. })
        ));
        // 0 is not the identity: swap labels of a Z_2 table
        let add = table(&[&[1, 0], &[0, 1]]);
        let mul = CayleyTable::from_fn(2, |_, _| 0);
        let Err(StructureError::Violations(v)) = validate_near_ring(add, mul) else {
            panic!()
        };
        assert!(v.iter().any(|v| v.axiom == Axiom::AdditiveIdentity));
    }

    #[test]
    fn zero_symmetry() {
        assert!(fixtures::z2_field().is_zero_symmetric());
        assert!(!fixtures::z2_rproj().is_zero_symmetric());
        assert!(fixtures::z2_zero().is_zero_symmetric());
    }

    #[test]
    fn three_primeness() {
        assert!(fixtures::z5_ring().is_3_prime());
        assert_eq!(fixtures::z6_ring().three_prime_witness(), Some((2, 3)));
        assert_eq!(fixtures::k4_zero().three_prime_witness(), Some((1, 1)));
    }

    #[test]
    fn two_torsion() {
        assert!(fixtures::z3_ring().is_2_torsion_free());
        assert!(!fixtures::z2_field().is_2_torsion_free());
        assert!(!fixtures::z4_ring().is_2_torsion_free());
    }

    #[test]
    fn centers() {
        assert_eq!(fixtures::z5_ring().center(), vec![0, 1, 2, 3, 4]);
        assert!(fixtures::z2_rproj().center().is_empty());
        assert_eq!(fixtures::z2_zero().center(), vec![0, 1]);
    }

    #[test]
    fn lie_and_jordan() {
        let n = fixtures::z3_ring();
        for x in n.elements() {
            assert_eq!(n.lie(x, x), 0);
        }
        assert_eq!(n.lie(1, 2), 0);
        assert_eq!(n.jordan(1, 2), 1);
    }

    #[test]
    fn structural_predicate_record() {
        assert!(fixtures::z3_ring().structural_predicates().is_commutative_ring);
        let s3 = fixtures::s3_zero().structural_predicates();
        assert!(!s3.abelian_addition);
        assert!(!s3.is_commutative_ring);
        assert!(fixtures::k4_zero().structural_predicates().is_commutative_ring);
        assert!(fixtures::z6_ring().is_zero_divisor(2));
        assert!(!fixtures::z5_ring().is_zero_divisor(3));
    }

    #[test]
    fn central_semigroup_ideals() {
        assert_eq!(fixtures::z3_ring().semigroup_ideal_in_center(), Some(vec![0, 1, 2]));
        assert_eq!(fixtures::z2_rproj().semigroup_ideal_in_center(), None);
        assert_eq!(fixtures::z2_field().semigroup_ideal_in_center(), Some(vec![0, 1]));
    }

    #[test]
    fn relabel_preserves_validity() {
        let n = fixtures::z4_ring();
        let r = n.relabel(&[0, 3, 2, 1]);
        assert!(validate_near_ring(r.add_table().clone(), r.mul_table().clone()).is_ok());
        assert_eq!(r.neg(1), 3);
    }
}
