//! Checkable statements about 3-prime near-rings and their multiplicative
//! derivations, with verdicts per structure or per (structure, derivation).
//!
//! Every statement is split into droppable hypotheses (structural
//! preconditions, "d is nonzero", and one premise) and a conclusion. A
//! verdict is `Skipped` when a hypothesis fails, `Verified` when hypotheses
//! and conclusion hold, and `Refuted` when the hypotheses hold but the
//! conclusion does not.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Element, NearRing};
use crate::derivation::{annihilator_checks, enumerate_mult_derivations, DerivationMap};
use crate::enumerate::{constructed_families, enumerate_groups, enumerate_nearrings, EnumerationError};
use crate::identity::{holds_for_all_with_center, parse_identity, Identity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpecId {
    L1a,
    L1b,
    L1c,
    L2,
    L3,
    L5,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl SpecId {
    pub const ALL: [SpecId; 12] = [
        SpecId::L1a,
        SpecId::L1b,
        SpecId::L1c,
        SpecId::L2,
        SpecId::L3,
        SpecId::L5,
        SpecId::T1,
        SpecId::T2,
        SpecId::T3,
        SpecId::T4,
        SpecId::T5,
        SpecId::T6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpecId::L1a => "L1a",
            SpecId::L1b => "L1b",
            SpecId::L1c => "L1c",
            SpecId::L2 => "L2",
            SpecId::L3 => "L3",
            SpecId::L5 => "L5",
            SpecId::T1 => "T1",
            SpecId::T2 => "T2",
            SpecId::T3 => "T3",
            SpecId::T4 => "T4",
            SpecId::T5 => "T5",
            SpecId::T6 => "T6",
        }
    }
}

impl fmt::Display for SpecId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpecId {
    type Err = TheoremError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SpecId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| TheoremError::UnknownSpec(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoremError {
    #[error("unknown spec id {0:?} (expected one of L1a L1b L1c L2 L3 L5 T1..T6)")]
    UnknownSpec(String),
    #[error("{spec} has no hypothesis named {name:?} (droppable: {available})")]
    UnknownHypothesis {
        spec: SpecId,
        name: String,
        available: String,
    },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructuralPre {
    ThreePrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationScope {
    None,
    PerDerivation { require_nonzero: bool },
}

/// The statement-specific premise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Premise {
    /// `z ∈ Z \ {0}`
    CentralNonzero,
    /// `z ∈ Z \ {0}` and `z + z ∈ Z`
    CentralDouble,
    /// `z ∈ Z \ {0}` and `xz ∈ Z` or `zx ∈ Z`
    CentralProduct,
    /// Z contains a nonzero semigroup ideal
    CentralIdeal,
    /// `d(N) a = 0` or `a d(N) = 0`
    Annihilates,
    /// `d(N) ⊆ Z`
    ImageCentral,
    /// The spec's hypothesis identities hold for all assignments.
    Identities,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    NotZeroDivisor,
    AbelianAddition,
    ElementInCenter,
    CommutativeRing,
    /// Some multiplicative derivation exists iff N is zero-symmetric.
    DerivableIffZeroSymmetric,
    ElementIsZero,
    DIsZero,
}

/// A droppable hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hypothesis {
    ThreePrime,
    NonzeroDerivation,
    Premise,
}

#[derive(Clone, Debug)]
pub struct TheoremSpec {
    pub id: SpecId,
    /// Formal one-line statement.
    pub statement: &'static str,
    pub structural_pre: Vec<StructuralPre>,
    pub derivation_scope: DerivationScope,
    pub premise: Premise,
    /// Name under which the premise can be dropped.
    pub premise_name: &'static str,
    pub hypothesis_identities: Vec<Identity>,
    /// Element-level quantifiers, if the statement has any.
    pub element_quantifiers: Option<&'static str>,
    pub conclusion: Conclusion,
}

impl TheoremSpec {
    /// Droppable hypotheses with their names.
    pub fn hypotheses(&self) -> Vec<(&'static str, Hypothesis)> {
        let mut out = Vec::new();
        if self.structural_pre.contains(&StructuralPre::ThreePrime) {
            out.push(("three_prime", Hypothesis::ThreePrime));
        }
        if let DerivationScope::PerDerivation {
            require_nonzero: true,
        } = self.derivation_scope
        {
            out.push(("nonzero_d", Hypothesis::NonzeroDerivation));
        }
        if self.premise != Premise::None {
            out.push((self.premise_name, Hypothesis::Premise));
        }
        out
    }

    pub fn hypothesis_named(&self, name: &str) -> Result<Hypothesis, TheoremError> {
        let hyps = self.hypotheses();
        hyps.iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, h)| h)
            .ok_or_else(|| TheoremError::UnknownHypothesis {
                spec: self.id,
                name: name.to_string(),
                available: hyps.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "),
            })
    }

    pub fn require_nonzero(&self) -> bool {
        matches!(
            self.derivation_scope,
            DerivationScope::PerDerivation {
                require_nonzero: true
            }
        )
    }
}

fn identities(texts: &[&str]) -> Vec<Identity> {
    texts
        .iter()
        .map(|t| parse_identity(t).expect("built-in identity parses"))
        .collect()
}

/// The twelve built-in statements.
pub fn registry() -> Vec<TheoremSpec> {
    use Conclusion as C;
    use DerivationScope::PerDerivation;
    let three_prime = vec![StructuralPre::ThreePrime];
    let spec = |id, statement, scope, premise, premise_name, ids: &[&str], quant, conclusion| TheoremSpec {
        id,
        statement,
        structural_pre: if id == SpecId::L3 { vec![] } else { three_prime.clone() },
        derivation_scope: scope,
        premise,
        premise_name,
        hypothesis_identities: identities(ids),
        element_quantifiers: quant,
        conclusion,
    };
    vec![
        spec(
            SpecId::L1a,
            "3-prime, z in Z\\{0} => z is not a zero divisor",
            DerivationScope::None,
            Premise::CentralNonzero,
            "central_nonzero",
            &[],
            Some("for each z in Z\\{0}"),
            C::NotZeroDivisor,
        ),
        spec(
            SpecId::L1b,
            "3-prime, some z in Z\\{0} with z+z in Z => (N,+) abelian",
            DerivationScope::None,
            Premise::CentralDouble,
            "central_double",
            &[],
            Some("exists z in Z\\{0} with z+z in Z"),
            C::AbelianAddition,
        ),
        spec(
            SpecId::L1c,
            "3-prime, z in Z\\{0}, xz in Z or zx in Z => x in Z",
            DerivationScope::None,
            Premise::CentralProduct,
            "central_product",
            &[],
            Some("for each z in Z\\{0} and x in N"),
            C::ElementInCenter,
        ),
        spec(
            SpecId::L2,
            "3-prime, Z contains a nonzero semigroup ideal => commutative ring",
            DerivationScope::None,
            Premise::CentralIdeal,
            "central_ideal",
            &[],
            None,
            C::CommutativeRing,
        ),
        spec(
            SpecId::L3,
            "N admits a multiplicative derivation <=> N is zero-symmetric",
            DerivationScope::None,
            Premise::None,
            "",
            &[],
            None,
            C::DerivableIffZeroSymmetric,
        ),
        spec(
            SpecId::L5,
            "3-prime, d != 0, d(N)a = 0 or a d(N) = 0 => a = 0",
            PerDerivation { require_nonzero: true },
            Premise::Annihilates,
            "annihilates",
            &[],
            Some("for each a in N"),
            C::ElementIsZero,
        ),
        spec(
            SpecId::T1,
            "3-prime, d != 0, d(N) in Z => commutative ring",
            PerDerivation { require_nonzero: true },
            Premise::ImageCentral,
            "image_central",
            &[],
            None,
            C::CommutativeRing,
        ),
        spec(
            SpecId::T2,
            "3-prime, d(xy) = d(x)d(y) => d = 0",
            PerDerivation { require_nonzero: false },
            Premise::Identities,
            "d_hom",
            &["d(x*y) = d(x)*d(y)"],
            None,
            C::DIsZero,
        ),
        spec(
            SpecId::T3,
            "3-prime, d(xy) = d(y)d(x) => d = 0",
            PerDerivation { require_nonzero: false },
            Premise::Identities,
            "d_antihom",
            &["d(x*y) = d(y)*d(x)"],
            None,
            C::DIsZero,
        ),
        spec(
            SpecId::T4,
            "3-prime, d != 0, d([x,y]) = [d(x),y] => commutative ring",
            PerDerivation { require_nonzero: true },
            Premise::Identities,
            "d_lie",
            &["d([x,y]) = [d(x),y]"],
            None,
            C::CommutativeRing,
        ),
        spec(
            SpecId::T5,
            "3-prime, d != 0, [d(x),y] = [d(x),d(y)] => commutative ring",
            PerDerivation { require_nonzero: true },
            Premise::Identities,
            "lie_dd",
            &["[d(x),y] = [d(x),d(y)]"],
            None,
            C::CommutativeRing,
        ),
        spec(
            SpecId::T6,
            "3-prime, d != 0, [d(x),y] in Z => commutative ring",
            PerDerivation { require_nonzero: true },
            Premise::Identities,
            "lie_central",
            &["[d(x),y] in Z"],
            None,
            C::CommutativeRing,
        ),
    ]
}

pub fn spec_by_id(id: SpecId) -> TheoremSpec {
    registry()
        .into_iter()
        .find(|s| s.id == id)
        .expect("registry covers every id")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    Skipped,
    Verified,
    Refuted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Skipped => "Skipped",
            Status::Verified => "Verified",
            Status::Refuted => "Refuted",
        })
    }
}

/// Concrete data behind a verdict: the derivation, the element bindings,
/// and a description of what failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Vec<Element>>,
    pub bindings: Vec<(String, Element)>,
    pub detail: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(d) = &self.derivation {
            parts.push(format!("d={d:?}"));
        }
        if !self.bindings.is_empty() {
            let b: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
            parts.push(b.join(","));
        }
        if !self.detail.is_empty() {
            parts.push(self.detail.clone());
        }
        f.write_str(&parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub structure: String,
    pub spec: SpecId,
    pub derivation: Option<usize>,
    pub status: Status,
    pub witness: Option<Witness>,
}

/// How identity premises are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PremiseRoute {
    /// Through the identity language.
    #[default]
    Dsl,
    /// Through direct table loops.
    HandCoded,
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub drop: BTreeSet<Hypothesis>,
    pub route: PremiseRoute,
}

/// Per-structure facts shared by every spec check.
pub struct StructureContext<'a> {
    pub near_ring: &'a NearRing,
    pub id: String,
    pub derivations: Vec<DerivationMap>,
    pub center: Vec<bool>,
    pub three_prime: bool,
}

impl<'a> StructureContext<'a> {
    pub fn new(near_ring: &'a NearRing, id: impl Into<String>) -> Self {
        Self {
            near_ring,
            id: id.into(),
            derivations: enumerate_mult_derivations(near_ring),
            center: near_ring.center_mask(),
            three_prime: near_ring.is_3_prime(),
        }
    }

    fn verdict(&self, spec: &TheoremSpec, derivation: Option<usize>, status: Status, witness: Option<Witness>) -> Verdict {
        Verdict {
            structure: self.id.clone(),
            spec: spec.id,
            derivation,
            status,
            witness,
        }
    }

    pub fn check(&self, spec: &TheoremSpec, opts: &CheckOptions) -> Vec<Verdict> {
        let dropped = |h| opts.drop.contains(&h);
        if spec.structural_pre.contains(&StructuralPre::ThreePrime)
            && !dropped(Hypothesis::ThreePrime)
            && !self.three_prime
        {
            return vec![self.verdict(spec, None, Status::Skipped, None)];
        }
        match spec.derivation_scope {
            DerivationScope::None => vec![self.check_structure(spec, dropped(Hypothesis::Premise))],
            DerivationScope::PerDerivation { require_nonzero } => {
                if self.derivations.is_empty() {
                    return vec![self.verdict(spec, None, Status::Skipped, None)];
                }
                let need_nonzero = require_nonzero && !dropped(Hypothesis::NonzeroDerivation);
                self.derivations
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        if need_nonzero && d.is_zero() {
                            self.verdict(spec, Some(i), Status::Skipped, None)
                        } else {
                            self.check_derivation(spec, i, d, dropped(Hypothesis::Premise), opts.route)
                        }
                    })
                    .collect()
            }
        }
    }

    fn check_structure(&self, spec: &TheoremSpec, premise_dropped: bool) -> Verdict {
        let n = self.near_ring;
        let central_nonzero = |z: Element| z != 0 && self.center[z];
        let refuted = |bindings: Vec<(&str, Element)>, detail: String| {
            let witness = Witness {
                derivation: None,
                bindings: bindings.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                detail,
            };
            self.verdict(spec, None, Status::Refuted, Some(witness))
        };
        let skipped = self.verdict(spec, None, Status::Skipped, None);
        let verified = self.verdict(spec, None, Status::Verified, None);

        match spec.conclusion {
            Conclusion::NotZeroDivisor => {
                let candidates: Vec<Element> =
                    n.elements().filter(|&z| premise_dropped || central_nonzero(z)).collect();
                if candidates.is_empty() {
                    return skipped;
                }
                for z in candidates {
                    if let Some(x) = n.zero_divisor_partner(z) {
                        return refuted(vec![("z", z), ("x", x)], format!("{z} is a zero divisor"));
                    }
                }
                verified
            }
            Conclusion::AbelianAddition => {
                let hit = n.elements().find(|&z| {
                    premise_dropped || (central_nonzero(z) && self.center[n.add(z, z)])
                });
                let Some(z) = hit else { return skipped };
                match n.addition_commutator_witness() {
                    Some((x, y)) => refuted(
                        vec![("z", z), ("x", x), ("y", y)],
                        format!("addition not abelian: {x}+{y} != {y}+{x}"),
                    ),
                    None => verified,
                }
            }
            Conclusion::ElementInCenter => {
                let mut any = false;
                for z in n.elements() {
                    for x in n.elements() {
                        let premise = premise_dropped
                            || (central_nonzero(z) && (self.center[n.mul(x, z)] || self.center[n.mul(z, x)]));
                        if !premise {
                            continue;
                        }
                        any = true;
                        if !self.center[x] {
                            return refuted(vec![("z", z), ("x", x)], format!("{x} is not central"));
                        }
                    }
                }
                if any {
                    verified
                } else {
                    skipped
                }
            }
            Conclusion::CommutativeRing => {
                let ideal = n.semigroup_ideal_in_center();
                if ideal.is_none() && !premise_dropped {
                    return skipped;
                }
                match n.commutative_ring_failure() {
                    Some(why) => {
                        let detail = match ideal {
                            Some(i) => format!("central ideal {i:?}; {why}"),
                            None => why,
                        };
                        refuted(vec![], detail)
                    }
                    None => verified,
                }
            }
            Conclusion::DerivableIffZeroSymmetric => {
                let derivable = !self.derivations.is_empty();
                let zero_symmetric = n.is_zero_symmetric();
                if derivable == zero_symmetric {
                    verified
                } else {
                    refuted(
                        vec![],
                        format!("derivations: {}, zero-symmetric: {zero_symmetric}", self.derivations.len()),
                    )
                }
            }
            Conclusion::ElementIsZero | Conclusion::DIsZero => {
                unreachable!("{} is a per-derivation conclusion", spec.id)
            }
        }
    }

    fn check_derivation(
        &self,
        spec: &TheoremSpec,
        index: usize,
        d: &DerivationMap,
        premise_dropped: bool,
        route: PremiseRoute,
    ) -> Verdict {
        let n = self.near_ring;
        let witness = |bindings: Vec<(String, Element)>, detail: String| Witness {
            derivation: Some(d.images().to_vec()),
            bindings,
            detail,
        };

        if spec.conclusion == Conclusion::ElementIsZero {
            let candidates: Vec<Element> = n
                .elements()
                .filter(|&a| {
                    premise_dropped || {
                        let c = annihilator_checks(n, d, a);
                        c.dna_zero || c.adn_zero
                    }
                })
                .collect();
            if candidates.is_empty() {
                return self.verdict(spec, Some(index), Status::Skipped, None);
            }
            return match candidates.into_iter().find(|&a| a != 0) {
                Some(a) => self.verdict(
                    spec,
                    Some(index),
                    Status::Refuted,
                    Some(witness(vec![("a".into(), a)], format!("a = {a} is nonzero"))),
                ),
                None => self.verdict(spec, Some(index), Status::Verified, None),
            };
        }

        let premise_holds = premise_dropped
            || match spec.premise {
                Premise::ImageCentral => d.images().iter().all(|&v| self.center[v]),
                Premise::Identities => match route {
                    PremiseRoute::Dsl => spec
                        .hypothesis_identities
                        .iter()
                        .all(|id| holds_for_all_with_center(n, d, id, &self.center).is_ok()),
                    PremiseRoute::HandCoded => hand_coded_premise(spec.id, n, d, &self.center),
                },
                Premise::None => true,
                other => unreachable!("{other:?} is not a derivation premise"),
            };
        if !premise_holds {
            return self.verdict(spec, Some(index), Status::Skipped, None);
        }

        let failure = match spec.conclusion {
            Conclusion::CommutativeRing => n.commutative_ring_failure(),
            Conclusion::DIsZero => n
                .elements()
                .find(|&x| d.apply(x) != 0)
                .map(|x| format!("d({x}) = {} != 0", d.apply(x))),
            other => unreachable!("{other:?} is not a per-derivation conclusion"),
        };
        match failure {
            Some(detail) => self.verdict(spec, Some(index), Status::Refuted, Some(witness(vec![], detail))),
            None => self.verdict(spec, Some(index), Status::Verified, None),
        }
    }
}

/// Identity premises of T2 to T6 as direct table loops, independent of the
/// identity language.
pub fn hand_coded_premise(id: SpecId, n: &NearRing, d: &DerivationMap, center: &[bool]) -> bool {
    let pairs = || n.elements().flat_map(|x| n.elements().map(move |y| (x, y)));
    let d = |x| d.apply(x);
    match id {
        SpecId::T2 => pairs().all(|(x, y)| d(n.mul(x, y)) == n.mul(d(x), d(y))),
        SpecId::T3 => pairs().all(|(x, y)| d(n.mul(x, y)) == n.mul(d(y), d(x))),
        SpecId::T4 => pairs().all(|(x, y)| {
            let xy_yx = n.add(n.mul(x, y), n.neg(n.mul(y, x)));
            let dx = d(x);
            d(xy_yx) == n.add(n.mul(dx, y), n.neg(n.mul(y, dx)))
        }),
        SpecId::T5 => pairs().all(|(x, y)| {
            let dx = d(x);
            let dy = d(y);
            n.add(n.mul(dx, y), n.neg(n.mul(y, dx))) == n.add(n.mul(dx, dy), n.neg(n.mul(dy, dx)))
        }),
        SpecId::T6 => pairs().all(|(x, y)| {
            let dx = d(x);
            center[n.add(n.mul(dx, y), n.neg(n.mul(y, dx)))]
        }),
        other => panic!("{other} has no identity premise"),
    }
}

/// Checks one statement against one structure.
pub fn check_theorem(n: &NearRing, spec: &TheoremSpec) -> Vec<Verdict> {
    check_theorem_with(n, spec, &CheckOptions::default())
}

pub fn check_theorem_with(n: &NearRing, spec: &TheoremSpec, opts: &CheckOptions) -> Vec<Verdict> {
    StructureContext::new(n, structure_id(n)).check(spec, opts)
}

pub(crate) fn structure_id(n: &NearRing) -> String {
    n.name().unwrap_or("<unnamed>").to_string()
}

/// A structure on which a weakened statement fails.
#[derive(Clone, Debug)]
pub struct HuntWitness {
    pub near_ring: NearRing,
    pub verdict: Verdict,
    pub dropped: Vec<String>,
}

impl HuntWitness {
    pub fn derivation(&self) -> Option<DerivationMap> {
        self.verdict
            .witness
            .as_ref()
            .and_then(|w| w.derivation.clone())
            .map(DerivationMap::new)
    }
}

impl fmt::Display for HuntWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.verdict.structure, self.verdict.spec)?;
        if let Some(i) = self.verdict.derivation {
            write!(f, " d#{i}")?;
        }
        write!(f, " without [{}]", self.dropped.join(", "))?;
        if let Some(w) = &self.verdict.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// Resolves hypothesis names against `spec`.
pub fn resolve_drop(spec: &TheoremSpec, names: &[String]) -> Result<BTreeSet<Hypothesis>, TheoremError> {
    names.iter().map(|name| spec.hypothesis_named(name)).collect()
}

/// Structures in `catalog` that satisfy `spec` with `drop` removed but
/// violate its conclusion, at most `max` of them.
pub fn hunt_counterexamples(
    catalog: &[NearRing],
    spec: &TheoremSpec,
    drop: &[String],
    max: usize,
) -> Result<Vec<HuntWitness>, TheoremError> {
    let opts = CheckOptions {
        drop: resolve_drop(spec, drop)?,
        route: PremiseRoute::Dsl,
    };
    let mut out = Vec::new();
    for n in catalog {
        if out.len() >= max {
            break;
        }
        for verdict in check_theorem_with(n, spec, &opts) {
            if verdict.status == Status::Refuted {
                out.push(HuntWitness {
                    near_ring: n.clone(),
                    verdict,
                    dropped: drop.to_vec(),
                });
                if out.len() >= max {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn search_pool(
    pool: Vec<NearRing>,
    order: usize,
    seen: &mut Vec<NearRing>,
    spec: &TheoremSpec,
    drop: &[String],
    max: usize,
    out: &mut Vec<HuntWitness>,
) -> Result<(), TheoremError> {
    let fresh: Vec<NearRing> = pool
        .into_iter()
        .filter(|n| n.order() == order && !seen.contains(n))
        .collect();
    let found = hunt_counterexamples(&fresh, spec, drop, max - out.len())?;
    out.extend(found);
    seen.extend(fresh);
    Ok(())
}

/// Searches `existing` structures of order `order`, then the constructed
/// families of that order, then the full enumeration on every group.
pub fn hunt_at_order(
    existing: &[NearRing],
    spec: &TheoremSpec,
    drop: &[String],
    order: usize,
    max: usize,
) -> Result<Vec<HuntWitness>, TheoremError> {
    resolve_drop(spec, drop)?;
    let mut seen: Vec<NearRing> = Vec::new();
    let mut out = Vec::new();
    search_pool(existing.to_vec(), order, &mut seen, spec, drop, max, &mut out)?;
    if out.len() < max {
        search_pool(constructed_families(order)?, order, &mut seen, spec, drop, max, &mut out)?;
    }
    for g in enumerate_groups(order)? {
        if out.len() >= max {
            break;
        }
        search_pool(enumerate_nearrings(&g), order, &mut seen, spec, drop, max, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn registry_shape() {
        let reg = registry();
        assert_eq!(reg.len(), 12);
        let ids: Vec<SpecId> = reg.iter().map(|s| s.id).collect();
        assert_eq!(ids, SpecId::ALL.to_vec());
        assert!(!spec_by_id(SpecId::T2).require_nonzero());
        assert!(!spec_by_id(SpecId::T3).require_nonzero());
        for id in [SpecId::T1, SpecId::T4, SpecId::T5, SpecId::T6, SpecId::L5] {
            assert!(spec_by_id(id).require_nonzero(), "{id}");
        }
        let t4 = spec_by_id(SpecId::T4);
        assert_eq!(t4.structural_pre, vec![StructuralPre::ThreePrime]);
    }

    #[test]
    fn spec_ids_parse() {
        assert_eq!("t4".parse::<SpecId>(), Ok(SpecId::T4));
        assert_eq!("L1a".parse::<SpecId>(), Ok(SpecId::L1a));
        assert!(matches!("T7".parse::<SpecId>(), Err(TheoremError::UnknownSpec(_))));
    }

    #[test]
    fn hypothesis_names() {
        let t2 = spec_by_id(SpecId::T2);
        assert_eq!(t2.hypothesis_named("three_prime"), Ok(Hypothesis::ThreePrime));
        assert_eq!(t2.hypothesis_named("d_hom"), Ok(Hypothesis::Premise));
        assert!(t2.hypothesis_named("nonzero_d").is_err());
        assert!(spec_by_id(SpecId::L3).hypotheses().is_empty());
    }

    #[test]
    fn t1_on_z2_field_is_skipped() {
        let v = check_theorem(&fixtures::z2_field(), &spec_by_id(SpecId::T1));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].status, Status::Skipped);
        assert_eq!(v[0].derivation, Some(0));
    }

    #[test]
    fn t2_on_z2_zero_is_skipped() {
        let v = check_theorem(&fixtures::z2_zero(), &spec_by_id(SpecId::T2));
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].status, v[0].derivation), (Status::Skipped, None));
    }

    #[test]
    fn l2_on_z3_is_verified() {
        let v = check_theorem(&fixtures::z3_ring(), &spec_by_id(SpecId::L2));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].status, Status::Verified);
    }

    #[test]
    fn l3_on_fixtures() {
        for n in fixtures::all() {
            let v = check_theorem(&n, &spec_by_id(SpecId::L3));
            assert_eq!(v[0].status, Status::Verified, "{n}");
        }
    }

    #[test]
    fn no_derivations_means_skipped() {
        let v = check_theorem(&fixtures::z2_rproj(), &spec_by_id(SpecId::T2));
        assert_eq!((v[0].status, v[0].derivation), (Status::Skipped, None));
    }

    #[test]
    fn dropping_three_prime_exposes_t2() {
        let spec = spec_by_id(SpecId::T2);
        let opts = CheckOptions {
            drop: [Hypothesis::ThreePrime].into(),
            route: PremiseRoute::Dsl,
        };
        let v = check_theorem_with(&fixtures::z2_zero(), &spec, &opts);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].status, Status::Verified);
        assert_eq!(v[1].status, Status::Refuted);
        assert_eq!(v[1].witness.as_ref().unwrap().derivation, Some(vec![0, 1]));
    }

    #[test]
    fn unknown_drop_is_rejected() {
        let spec = spec_by_id(SpecId::T2);
        let err = hunt_counterexamples(&[], &spec, &["bogus".into()], 1).unwrap_err();
        assert!(matches!(err, TheoremError::UnknownHypothesis { .. }));
    }

    #[test]
    fn hunts_on_small_orders() {
        let t2 = spec_by_id(SpecId::T2);
        let w = hunt_at_order(&[], &t2, &["three_prime".into()], 2, 1).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].near_ring.name(), Some("Z2_ZERO"));
        assert_eq!(w[0].derivation(), Some(DerivationMap::new(vec![0, 1])));

        let l5 = spec_by_id(SpecId::L5);
        let w = hunt_at_order(&[], &l5, &["three_prime".into()], 2, 1).unwrap();
        assert_eq!(w[0].near_ring.name(), Some("Z2_ZERO"));
        assert_eq!(w[0].verdict.witness.as_ref().unwrap().bindings, vec![("a".to_string(), 1)]);
    }

    #[test]
    fn witness_display() {
        let w = Witness {
            derivation: Some(vec![0, 1]),
            bindings: vec![("a".into(), 1)],
            detail: "a = 1 is nonzero".into(),
        };
        assert_eq!(w.to_string(), "d=[0, 1]; a=1; a = 1 is nonzero");
    }
}
