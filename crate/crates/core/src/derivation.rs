//! Multiplicative derivations: self-maps with `d(xy) = x d(y) + d(x) y`.
//! Nothing here assumes additivity or `d(0) = 0`.

use std::fmt;

use crate::algebra::{Element, NearRing};

/// A self-map of a near-ring, given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivationMap {
    images: Vec<Element>,
}

impl DerivationMap {
    pub fn new(images: Vec<Element>) -> Self {
        Self { images }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            images: vec![0; order],
        }
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.images[x]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|&v| v == 0)
    }

    /// `d ∘ d`. Generally not itself a derivation.
    pub fn squared(&self) -> DerivationMap {
        DerivationMap {
            images: self.images.iter().map(|&v| self.images[v]).collect(),
        }
    }
}

impl fmt::Display for DerivationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

#[inline]
fn product_rule_holds(n: &NearRing, d: &[Element], x: Element, y: Element) -> bool {
    d[n.mul(x, y)] == n.add(n.mul(x, d[y]), n.mul(d[x], y))
}

/// First pair `(x, y)` (x major) where the product rule fails.
pub fn derivation_violation(n: &NearRing, d: &DerivationMap) -> Option<(Element, Element)> {
    assert_eq!(d.order(), n.order(), "map and structure differ in size");
    n.elements()
        .flat_map(|x| n.elements().map(move |y| (x, y)))
        .find(|&(x, y)| !product_rule_holds(n, &d.images, x, y))
}

pub fn is_multiplicative_derivation(n: &NearRing, d: &DerivationMap) -> bool {
    derivation_violation(n, d).is_none()
}

/// Every multiplicative derivation of `n`, in lexicographic image order.
///
/// Depth-first over `d(0), d(1), ...`; the constraint for `(x, y)` is checked
/// as soon as `d(x)`, `d(y)` and `d(xy)` are all assigned.
pub fn enumerate_mult_derivations(n: &NearRing) -> Vec<DerivationMap> {
    let order = n.order();
    let mut ready: Vec<Vec<(Element, Element)>> = vec![Vec::new(); order];
    for x in n.elements() {
        for y in n.elements() {
            ready[x.max(y).max(n.mul(x, y))].push((x, y));
        }
    }
    let mut images = vec![0; order];
    let mut out = Vec::new();
    assign(n, &ready, &mut images, 0, &mut out);
    out
}

fn assign(
    n: &NearRing,
    ready: &[Vec<(Element, Element)>],
    images: &mut Vec<Element>,
    v: usize,
    out: &mut Vec<DerivationMap>,
) {
    if v == images.len() {
        out.push(DerivationMap::new(images.clone()));
        return;
    }
    for value in n.elements() {
        images[v] = value;
        if ready[v].iter().all(|&(x, y)| product_rule_holds(n, images, x, y)) {
            assign(n, ready, images, v + 1, out);
        }
    }
}

/// `d(x + y) = d(x) + d(y)` for all pairs.
pub fn is_additive(n: &NearRing, d: &DerivationMap) -> bool {
    n.elements()
        .all(|x| n.elements().all(|y| d.apply(n.add(x, y)) == n.add(d.apply(x), d.apply(y))))
}

/// First triple where `(x d(y) + d(x) y) z = x d(y) z + d(x) y z` fails.
/// For a genuine derivation there is none.
pub fn lemma4_violation(n: &NearRing, d: &DerivationMap) -> Option<(Element, Element, Element)> {
    for x in n.elements() {
        for y in n.elements() {
            let xdy = n.mul(x, d.apply(y));
            let dxy = n.mul(d.apply(x), y);
            let sum = n.add(xdy, dxy);
            for z in n.elements() {
                if n.mul(sum, z) != n.add(n.mul(xdy, z), n.mul(dxy, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub fn lemma4_holds(n: &NearRing, d: &DerivationMap) -> bool {
    lemma4_violation(n, d).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnihilatorChecks {
    /// `d(x) a = 0` for all `x`.
    pub dna_zero: bool,
    /// `a d(x) = 0` for all `x`.
    pub adn_zero: bool,
}

pub fn annihilator_checks(n: &NearRing, d: &DerivationMap, a: Element) -> AnnihilatorChecks {
    AnnihilatorChecks {
        dna_zero: n.elements().all(|x| n.mul(d.apply(x), a) == 0),
        adn_zero: n.elements().all(|x| n.mul(a, d.apply(x)) == 0),
    }
}

pub fn d_squared(d: &DerivationMap) -> DerivationMap {
    d.squared()
}
