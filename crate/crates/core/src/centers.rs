//! Maximal-center exclusion for curves, nonsingular points and singular points,
//! and the rigidity verdict assembled from the per-center decisions.
//!
//! Every decision carries [`Certificate`]s: exact inequalities, identities or
//! constructed link targets, recomputed from the weights and degrees.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::blowup::{
    curve_test_value, embedded_product, kawamata_numbers, test_class_value, BlowupNumbers, CurveBlowupData,
    EmbeddedBlowupProduct, TestClass,
};
use crate::family::{CenterAnnotation, FamilyRecord, MethodTag, TableAnnotation};
use crate::poly::{CoefficientSeed, Poly, Ring};
use crate::rational::{fmt_rational, int, rat, Rational};
use crate::sarkisov::{
    dp_link_degree, fano_link_target, involution_numerology, verify_dp_link, verify_ei_identities,
    verify_link_equations, verify_qi_identities, Corruption, IdentityReport, InvolutionKind,
};
use crate::singularity::{basket, SingularityError};

/// Families whose classification is taken from earlier work.
pub const PRIOR_FAMILIES: [u32; 3] = [1, 2, 3];

/// Families whose nonsingular points need the special surface argument.
pub const SPECIAL_FAMILIES: [u32; 4] = [4, 6, 9, 11];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CenterError {
    #[error("family {family}: no nonsingular case applies")]
    Unclassified { family: u32 },
    #[error("family {family} {point} {method}: certificate failed: {detail}")]
    CertificateFail { family: u32, point: String, method: String, detail: String },
    #[error("family {family}: basket differs from the table: {detail}")]
    BasketMismatch { family: u32, detail: String },
    #[error("family {family}: link targets differ: {}", targets.join(" vs "))]
    InconsistentTargets { family: u32, targets: Vec<String> },
    #[error("family {family}: identity {identity} fails with difference {difference}")]
    IdentityFail { family: u32, identity: String, difference: String },
    #[error("family {0} has no special surface data")]
    NoSurfaceData(u32),
    #[error("family {family}: point {point} has no dagger data")]
    NoDagger { family: u32, point: String },
    #[error(transparent)]
    Singularity(#[from] SingularityError),
}

fn serialize_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn serialize_opt_rational<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

/// One checked statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub statement: String,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub value: Option<Rational>,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Le,
    Lt,
}

impl Certificate {
    fn compare(name: &str, lhs: Rational, rel: Rel, rhs_name: &str, rhs: &Rational) -> Certificate {
        let holds = match rel {
            Rel::Le => &lhs <= rhs,
            Rel::Lt => &lhs < rhs,
        };
        let op = if !holds {
            if &lhs == rhs {
                "="
            } else {
                ">"
            }
        } else if &lhs == rhs {
            "="
        } else {
            "<"
        };
        let rhs_text = if rhs_name.is_empty() {
            fmt_rational(rhs)
        } else {
            format!("{rhs_name} = {}", fmt_rational(rhs))
        };
        Certificate {
            statement: format!("{name} = {} {op} {rhs_text}", fmt_rational(&lhs)),
            value: Some(lhs),
            holds,
        }
    }

    fn fact(statement: impl Into<String>, holds: bool) -> Certificate {
        Certificate { statement: statement.into(), value: None, holds }
    }

    fn from_identities(prefix: &str, rep: &IdentityReport) -> Vec<Certificate> {
        rep.checks
            .iter()
            .map(|c| {
                let mut s = format!("{prefix}{}", c.name);
                if let Some(r) = &c.residual {
                    s.push_str(&format!(" (residual {r})"));
                }
                Certificate::fact(s, c.holds)
            })
            .collect()
    }
}

/// Nonsingular-point label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    Case(u8),
    Special,
    Prior,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::Case(n) => write!(f, "Case {n}"),
            CaseLabel::Special => f.write_str("SPECIAL"),
            CaseLabel::Prior => f.write_str("PRIOR"),
        }
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CenterKind {
    /// Curves of the given degree, or all curves when `degree` is absent.
    Curves { degree: Option<u32> },
    Nonsingular { label: CaseLabel },
    Singular {
        stratum: String,
        point_type: String,
        count: u32,
        spurious: bool,
        dagger: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExclusionMethod {
    DegreeBound,
    CurveTestClass,
    PaperGeometric,
    Isolating,
    SpecialSurface,
    TestClass,
    Cone,
    BadLink,
    Prior,
}

impl fmt::Display for ExclusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionMethod::DegreeBound => "degree-bound",
            ExclusionMethod::CurveTestClass => "curve-test-class",
            ExclusionMethod::PaperGeometric => "paper-geometric",
            ExclusionMethod::Isolating => "isolating",
            ExclusionMethod::SpecialSurface => "special-surface",
            ExclusionMethod::TestClass => "test-class",
            ExclusionMethod::Cone => "cone",
            ExclusionMethod::BadLink => "bad-link",
            ExclusionMethod::Prior => "prior",
        })
    }
}

/// Target of a link to a different Mori fiber space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinkTarget {
    Fano { degree: u32, weights: [u32; 5] },
    DelPezzo { k: u32 },
}

impl LinkTarget {
    /// Equality up to reordering of the target weights.
    pub fn same_as(&self, other: &LinkTarget) -> bool {
        match (self, other) {
            (LinkTarget::Fano { degree: d, weights: w }, LinkTarget::Fano { degree: e, weights: v }) => {
                let mut a = *w;
                let mut b = *v;
                a.sort_unstable();
                b.sort_unstable();
                d == e && a == b
            }
            (LinkTarget::DelPezzo { k }, LinkTarget::DelPezzo { k: l }) => k == l,
            _ => false,
        }
    }
}

impl fmt::Display for LinkTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkTarget::Fano { degree, weights } => {
                let w: Vec<String> = weights.iter().map(|a| a.to_string()).collect();
                write!(f, "X'_{degree} in P({})", w.join(","))
            }
            LinkTarget::DelPezzo { k } => write!(f, "dP_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Excluded(ExclusionMethod),
    Involution(InvolutionKind),
    Link(LinkTarget),
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Excluded(m) => write!(f, "EXCLUDED({m})"),
            Decision::Involution(k) => write!(f, "INVOLUTION({k})"),
            Decision::Link(t) => write!(f, "LINK({t})"),
        }
    }
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterVerdict {
    pub center: CenterKind,
    /// Method as annotated in the table, or the rule applied.
    pub method: String,
    pub decision: Decision,
    pub certificates: Vec<Certificate>,
}

impl CenterVerdict {
    pub fn verified(&self) -> bool {
        !self.certificates.is_empty() && self.certificates.iter().all(|c| c.holds)
    }

    pub fn label(&self) -> String {
        match &self.center {
            CenterKind::Curves { degree: Some(d) } => format!("curves of degree {d}"),
            CenterKind::Curves { degree: None } => "curves".into(),
            CenterKind::Nonsingular { label } => format!("nonsingular points ({label})"),
            CenterKind::Singular { stratum, point_type, .. } => format!("{stratum} {point_type}"),
        }
    }

    /// Fails with the first certificate that does not hold.
    pub fn check(&self, family: u32) -> Result<(), CenterError> {
        if self.verified() {
            return Ok(());
        }
        let detail = self
            .certificates
            .iter()
            .find(|c| !c.holds)
            .map(|c| c.statement.clone())
            .unwrap_or_else(|| "no certificate".into());
        Err(CenterError::CertificateFail { family, point: self.label(), method: self.method.clone(), detail })
    }
}

fn prior_verdict(f: &FamilyRecord, center: CenterKind) -> CenterVerdict {
    CenterVerdict {
        center,
        method: "prior".into(),
        decision: Decision::Excluded(ExclusionMethod::Prior),
        certificates: vec![Certificate::fact(format!("family {} is classified by earlier work", f.id), true)],
    }
}

// Curves

/// Integer degrees `d` with `1 <= d < A^3`, the only possible degrees of a maximal curve.
pub fn candidate_curve_degrees(a3: &Rational) -> Vec<u32> {
    (1u32..).take_while(|&d| &int(d as i64) < a3).collect()
}

fn line_family(f: &FamilyRecord) -> bool {
    f.weights[..3] == [1, 1, 1] && f.weights[3] == 2
}

/// Curve verdicts: a single degree-bound verdict when `A^3 <= 1`, otherwise
/// one verdict per candidate degree.
pub fn classify_curves(f: &FamilyRecord) -> Vec<CenterVerdict> {
    if PRIOR_FAMILIES.contains(&f.id) {
        return vec![prior_verdict(f, CenterKind::Curves { degree: None })];
    }
    let a3 = f.a3();
    if a3 <= int(1) {
        return vec![CenterVerdict {
            center: CenterKind::Curves { degree: None },
            method: "degree-bound".into(),
            decision: Decision::Excluded(ExclusionMethod::DegreeBound),
            certificates: vec![Certificate::compare("A^3", a3, Rel::Le, "", &int(1))],
        }];
    }
    let a5 = f.weights[5];
    candidate_curve_degrees(&a3)
        .into_iter()
        .map(|d| {
            let center = CenterKind::Curves { degree: Some(d) };
            if f.id == 4 && d == 1 {
                return CenterVerdict {
                    center,
                    method: "paper-geometric".into(),
                    decision: Decision::Excluded(ExclusionMethod::PaperGeometric),
                    certificates: vec![Certificate::fact(
                        "lines on X_{4,4}: excluded by the projection to P^3, not recomputed",
                        true,
                    )],
                };
            }
            let cases: Vec<(&str, CurveBlowupData, Rel)> = if f.id == 4 && d == 2 {
                vec![
                    ("conic", CurveBlowupData { deg: int(2), pa: 0, a: a5 }, Rel::Le),
                    ("elliptic", CurveBlowupData { deg: int(2), pa: 1, a: a5 }, Rel::Le),
                ]
            } else if d == 1 && line_family(f) {
                vec![("line", CurveBlowupData { deg: int(1), pa: 0, a: a5 }, Rel::Lt)]
            } else {
                vec![]
            };
            let certificates = if cases.is_empty() {
                vec![Certificate::fact(format!("no exclusion argument for curves of degree {d}"), false)]
            } else {
                cases
                    .into_iter()
                    .map(|(name, c, rel)| {
                        let v = curve_test_value(&a3, &c);
                        let label = format!("{name} ({}A* - E)(A* - E)^2 with deg {}, p_a {}", c.a, d, c.pa);
                        Certificate::compare(&label, v, rel, "", &Rational::zero())
                    })
                    .collect()
            };
            CenterVerdict {
                center,
                method: "curve-test-class".into(),
                decision: Decision::Excluded(ExclusionMethod::CurveTestClass),
                certificates,
            }
        })
        .collect()
}

// Nonsingular points

/// `max lcm(a_j, a_l)` over `l != j`, also skipping `l = k` when given.
pub fn isolating_degree(weights: &[u32], j: usize, k: Option<usize>) -> u64 {
    (0..weights.len())
        .filter(|&l| l != j && Some(l) != k)
        .map(|l| num_integer::lcm(weights[j] as u64, weights[l] as u64))
        .max()
        .unwrap_or(0)
}

/// The coordinate index `j`, the isolating degree `m` and the bound `4/A^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolatingCertificate {
    pub j: usize,
    pub excluded: Option<usize>,
    pub m: u64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub bound: Rational,
}

impl IsolatingCertificate {
    pub fn new(f: &FamilyRecord, j: usize, excluded: Option<usize>) -> IsolatingCertificate {
        IsolatingCertificate {
            j,
            excluded,
            m: isolating_degree(&f.weights, j, excluded),
            bound: rat(4, 1) / f.a3(),
        }
    }

    pub fn valid(&self) -> bool {
        int(self.m as i64) <= self.bound
    }
}

/// Isolating degrees quoted for individual families, each to be compared with `4/A^3`.
const QUOTED_ISOLATING: &[(u32, u64, &str)] = &[
    (4, 1, "points outside the special surfaces"),
    (6, 2, "points outside the special surfaces"),
    (7, 3, "points with x0 = x1 = x2 = 0"),
    (8, 2, "points with x0 = x1 = 0"),
    (9, 3, "points outside the special surfaces"),
    (10, 3, "points with x0 = x1 = 0"),
    (11, 3, "points outside the special surfaces"),
    (12, 4, "points with x0 = x1 = 0"),
    (15, 5, "points with x0 = x1 = 0"),
    (21, 8, "points with x0 = x1 = x2 = 0"),
    (36, 14, "points with x0 = x1 = x2 = 0"),
];

/// Families where nonsingular points on `(x0 = x1 = 0) ∩ Exc(π5)` are isolated by `a5 A`.
const EXCEPTIONAL_LOCUS_FAMILIES: [u32; 4] = [18, 21, 28, 36];

/// Case 1-5 from the products `a_i a_5`, `a_2 a_4` against `4/A^3`.
pub fn nonsingular_case(f: &FamilyRecord) -> Option<u8> {
    let q = rat(4, 1) / f.a3();
    let w = &f.weights;
    let p = |i: usize, j: usize| int((w[i] * w[j]) as i64);
    if p(4, 5) <= q {
        Some(1)
    } else if p(3, 5) <= q {
        Some(2)
    } else if p(2, 5) <= q {
        Some(3)
    } else if p(1, 5) <= q {
        Some(if p(2, 4) >= q { 4 } else { 5 })
    } else {
        None
    }
}

fn quoted_certificates(f: &FamilyRecord, q: &Rational) -> Vec<Certificate> {
    QUOTED_ISOLATING
        .iter()
        .filter(|(id, _, _)| *id == f.id)
        .map(|(_, l, what)| Certificate::compare(&format!("{what}: isolating class lA, l"), int(*l as i64), Rel::Le, "4/A^3", q))
        .collect()
}

pub fn classify_nonsingular(f: &FamilyRecord) -> Result<CenterVerdict, CenterError> {
    if PRIOR_FAMILIES.contains(&f.id) {
        return Ok(prior_verdict(f, CenterKind::Nonsingular { label: CaseLabel::Prior }));
    }
    let q = rat(4, 1) / f.a3();
    let w = &f.weights;
    let p = |i: usize, j: usize| int((w[i] * w[j]) as i64);
    let le = |i: usize, j: usize| Certificate::compare(&format!("a{i}a{j}"), p(i, j), Rel::Le, "4/A^3", &q);
    let above = |i: usize, j: usize| {
        let c = Certificate::compare("4/A^3", q.clone(), Rel::Lt, &format!("a{i}a{j}"), &p(i, j));
        Certificate { value: Some(p(i, j)), ..c }
    };
    if SPECIAL_FAMILIES.contains(&f.id) {
        let mut certificates = quoted_certificates(f, &q);
        let form = if f.id == 11 { IdentityForm::Corrected } else { IdentityForm::Displayed };
        for id in special_surface_checks(f, form, None)? {
            certificates.push(Certificate::fact(id.describe(), id.holds));
        }
        return Ok(CenterVerdict {
            center: CenterKind::Nonsingular { label: CaseLabel::Special },
            method: "special-surface".into(),
            decision: Decision::Excluded(ExclusionMethod::SpecialSurface),
            certificates,
        });
    }
    let case = nonsingular_case(f).ok_or(CenterError::Unclassified { family: f.id })?;
    let mut certificates = match case {
        1 => vec![le(4, 5)],
        2 => vec![le(3, 5), above(4, 5)],
        3 => vec![le(2, 5), above(3, 5)],
        4 => vec![le(1, 5), above(2, 5), {
            let c = Certificate::compare("4/A^3", q.clone(), Rel::Le, "a2a4", &p(2, 4));
            Certificate { value: Some(p(2, 4)), ..c }
        }],
        _ => vec![le(1, 5), above(2, 5), Certificate::compare("a2a4", p(2, 4), Rel::Lt, "4/A^3", &q)],
    };
    certificates.extend(quoted_certificates(f, &q));
    if case == 5 && EXCEPTIONAL_LOCUS_FAMILIES.contains(&f.id) {
        certificates.push(Certificate::fact(format!("a1 = {} = 1", w[1]), w[1] == 1));
        let split = (2..5).any(|k| (2..5).any(|l| k < l && w[k] + w[l] == w[5]));
        certificates.push(Certificate::fact(format!("a5 = {} = a_k + a_l for some 2 <= k < l <= 4", w[5]), split));
        certificates.push(Certificate::compare("exceptional locus: a1a5", p(1, 5), Rel::Le, "4/A^3", &q));
    }
    Ok(CenterVerdict {
        center: CenterKind::Nonsingular { label: CaseLabel::Case(case) },
        method: "isolating".into(),
        decision: Decision::Excluded(ExclusionMethod::Isolating),
        certificates,
    })
}

// Special surfaces

/// Which right-hand side of the completed square to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityForm {
    /// As displayed in the source.
    Displayed,
    /// With the constant terms solved from the left-hand side.
    Corrected,
}

/// Data of the surface `T ∈ |kA|` through a nonsingular point of families 4, 6, 9, 11.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    pub family: u32,
    pub k: i64,
    /// WCI type of the base curve `Γ`.
    pub curve_type: [u32; 4],
    /// Index of the singular point of `T` along `Γ'`.
    pub r_t: i64,
    /// Printed self-intersection `(Γ'^2)_T`.
    pub gamma_square: Rational,
    /// `(c, α0, κ)` in `2(β - (4 - α)/2)^2 + c(α - α0)^2 + κ`.
    pub square: [Rational; 3],
}

pub fn surface_data(family: u32, form: IdentityForm) -> Option<SurfaceData> {
    let (k, curve_type, r_t, gamma_square, square) = match (family, form) {
        (9, _) => (5, [1, 1, 2, 3], 4, rat(-9, 4), [rat(7, 4), int(1), int(0)]),
        (4, _) => (2, [1, 1, 1, 2], 3, rat(-5, 3), [rat(7, 6), rat(10, 7), rat(2, 7)]),
        (6, _) => (2, [1, 1, 2, 2], 3, rat(-5, 3), [rat(7, 6), rat(10, 7), rat(16, 7)]),
        (11, IdentityForm::Displayed) => (2, [1, 1, 2, 3], 5, rat(-7, 5), [rat(9, 5), int(1), rat(19, 5)]),
        (11, IdentityForm::Corrected) => (2, [1, 1, 2, 3], 5, rat(-7, 5), [rat(9, 10), int(2), int(2)]),
        _ => return None,
    };
    Some(SurfaceData { family, k, curve_type, r_t, gamma_square, square })
}

/// Ring `Q[α, β]`.
pub fn surface_ring() -> Arc<Ring> {
    Ring::new(&[("alpha", 1), ("beta", 1)])
}

/// `(A · Γ) = ∏c / ∏a` for the WCI curve.
pub fn curve_degree(f: &FamilyRecord, curve_type: &[u32; 4]) -> Rational {
    let c: i64 = curve_type.iter().map(|&x| x as i64).product();
    let a: i64 = f.weights.iter().map(|&x| x as i64).product();
    rat(c, a)
}

/// `(Γ'^2)_T = -2 - (K_T · Γ') + (r_T - 1)/r_T` with `K_T = (k - 1)A|_T`.
pub fn gamma_self_intersection(f: &FamilyRecord, d: &SurfaceData) -> Rational {
    int(-2) - int(d.k - 1) * curve_degree(f, &d.curve_type) + rat(d.r_t - 1, d.r_t)
}

/// `(L^2)_T` for `L = A|_T - βF - αΓ'` with `F^2 = -2`, `F · Γ' = 1`, `A · F = 0`.
pub fn l_squared(ring: &Arc<Ring>, f: &FamilyRecord, d: &SurfaceData) -> Poly {
    let alpha = Poly::var(ring, 0);
    let beta = Poly::var(ring, 1);
    let c = |q: Rational| Poly::constant(ring, q);
    let deg = curve_degree(f, &d.curve_type);
    let g2 = gamma_self_intersection(f, d);
    let mut l2 = c(int(d.k) * f.a3());
    l2 = &l2 - &alpha.scale(&(int(2) * deg));
    l2 = &l2 - &(&beta * &beta).scale(&int(2));
    l2 = &l2 + &(&alpha * &alpha).scale(&g2);
    &l2 + &(&alpha * &beta).scale(&int(2))
}

/// `4(2 - β) + 4(2 - β)(1 - α) - (L^2)_T`.
pub fn multiplicity_gap(ring: &Arc<Ring>, f: &FamilyRecord, d: &SurfaceData) -> Poly {
    let alpha = Poly::var(ring, 0);
    let beta = Poly::var(ring, 1);
    let c = |q: Rational| Poly::constant(ring, q);
    let two_minus_beta = &c(int(2)) - &beta;
    let one_minus_alpha = &c(int(1)) - &alpha;
    let lhs = &two_minus_beta.scale(&int(4)) + &(&two_minus_beta * &one_minus_alpha).scale(&int(4));
    &lhs - &l_squared(ring, f, d)
}

/// `2(β - (4 - α)/2)^2 + c(α - α0)^2 + κ`, with `perturb` adding 1 to one of `2, c, α0, κ`.
pub fn completed_square(ring: &Arc<Ring>, d: &SurfaceData, perturb: Option<usize>) -> Poly {
    let alpha = Poly::var(ring, 0);
    let beta = Poly::var(ring, 1);
    let k = |q: Rational| Poly::constant(ring, q);
    let mut coeffs = [int(2), d.square[0].clone(), d.square[1].clone(), d.square[2].clone()];
    if let Some(i) = perturb {
        coeffs[i % 4] += int(1);
    }
    let shift = &beta - &(&k(int(2)) - &alpha.scale(&rat(1, 2)));
    let centered = &alpha - &k(coeffs[2].clone());
    let s1 = (&shift * &shift).scale(&coeffs[0]);
    let s2 = (&centered * &centered).scale(&coeffs[1]);
    &(&s1 + &s2) + &k(coeffs[3].clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceIdentity {
    pub family: u32,
    pub name: String,
    pub form: IdentityForm,
    /// Left minus right, zero when the identity holds.
    #[serde(serialize_with = "serialize_display")]
    pub difference: Poly,
    pub holds: bool,
    /// The completed square must be positive for the contradiction.
    pub positive: bool,
}

impl SurfaceIdentity {
    pub fn describe(&self) -> String {
        let form = match self.form {
            IdentityForm::Displayed => "",
            IdentityForm::Corrected => " (corrected)",
        };
        if self.holds {
            format!("{}{form}: difference 0", self.name)
        } else {
            format!("{}{form}: difference {}", self.name, self.difference)
        }
    }

    pub fn ok(&self) -> Result<(), CenterError> {
        if self.holds {
            Ok(())
        } else {
            Err(CenterError::IdentityFail {
                family: self.family,
                identity: self.name.clone(),
                difference: self.difference.to_string(),
            })
        }
    }
}

fn identity(f: &FamilyRecord, name: &str, form: IdentityForm, lhs: &Poly, rhs: &Poly, positive: bool) -> SurfaceIdentity {
    let difference = lhs - rhs;
    SurfaceIdentity { family: f.id, name: name.into(), form, holds: difference.is_zero(), difference, positive }
}

/// All checks for one form: the self-intersection, the displayed `L^2` for
/// family 9, and the completed square.
pub fn special_surface_checks(
    f: &FamilyRecord,
    form: IdentityForm,
    perturb: Option<usize>,
) -> Result<Vec<SurfaceIdentity>, CenterError> {
    let d = surface_data(f.id, form).ok_or(CenterError::NoSurfaceData(f.id))?;
    let ring = surface_ring();
    let mut out = Vec::new();
    let g2 = gamma_self_intersection(f, &d);
    out.push(identity(
        f,
        &format!("G{} self-intersection of Gamma'", f.id),
        form,
        &Poly::constant(&ring, g2),
        &Poly::constant(&ring, d.gamma_square.clone()),
        true,
    ));
    if f.id == 9 {
        let displayed = Poly::parse(&ring, "25/4 - 2 beta^2 - 9/4 alpha^2 - 1/2 alpha + 2 alpha beta", |_| None)
            .expect("fixed polynomial parses");
        let l2 = l_squared(&ring, f, &d);
        out.push(identity(f, "G9 expansion of L^2", form, &l2, &displayed, true));
        let half = &Poly::var(&ring, 1) - &Poly::var(&ring, 0).scale(&rat(1, 2));
        let alpha = Poly::var(&ring, 0);
        let second = &(&(&half * &half).scale(&int(-2)) - &(&alpha * &alpha).scale(&rat(7, 4)))
            - &(&alpha.scale(&rat(1, 2)) - &Poly::constant(&ring, rat(25, 4)));
        out.push(identity(f, "G9 square in beta of L^2", form, &l2, &second, true));
    }
    let gap = multiplicity_gap(&ring, f, &d);
    let rhs = completed_square(&ring, &d, perturb);
    let positive = d.square[0].is_positive() && !d.square[2].is_negative();
    out.push(identity(f, &format!("G{} completed square", f.id), form, &gap, &rhs, positive));
    Ok(out)
}

/// The displayed completed-square identities for a family in {4, 6, 9, 11}.
pub fn special_surface_identities(f: &FamilyRecord) -> Result<Vec<SurfaceIdentity>, CenterError> {
    special_surface_checks(f, IdentityForm::Displayed, None)
}

// Singular points

/// Curve whose negative intersection with `B` rules out a link from the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BadLinkProduct {
    /// `(1/divisor) ∏ (d_i φ*A - (c_i/r) E)` on the Kawamata blowup.
    Kawamata { factors: [(u32, u32); 3], divisor: u32 },
    /// Five-fold product on an embedded weighted blowup of the ambient space.
    Embedded(EmbeddedBlowupProduct),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadLinkRecord {
    pub family: u32,
    pub stratum: &'static str,
    /// Monomial whose absence triggers the bad link, for dagger rows.
    pub dagger: Option<&'static str>,
    pub curve: &'static str,
    pub product: BadLinkProduct,
}

pub fn bad_link_records() -> Vec<BadLinkRecord> {
    let kaw = |factors, divisor| BadLinkProduct::Kawamata { factors, divisor };
    vec![
        BadLinkRecord {
            family: 69,
            stratum: "p2",
            dagger: None,
            curve: "S ∩ T for S = (x0 = 0), T = (x1 = 0)",
            product: kaw([(1, 1), (1, 1), (1, 6)], 1),
        },
        BadLinkRecord {
            family: 30,
            stratum: "p2",
            dagger: Some("y^2z"),
            curve: "one of two components of S ∩ T for S = (x0 = 0), T = (x1 = 0)",
            product: kaw([(1, 1), (1, 1), (1, 4)], 2),
        },
        BadLinkRecord {
            family: 40,
            stratum: "p2,5",
            dagger: Some("y^2z"),
            curve: "(x0 = x1 = s = yt + z^3 = 0)",
            product: BadLinkProduct::Embedded(EmbeddedBlowupProduct {
                ambient: [1, 1, 3, 4, 5, 9],
                r: 3,
                weights: [1, 4, 1, 2, 3],
                factors: [(1, 1), (1, 1), (1, 4), (5, 2), (12, 3)],
            }),
        },
        BadLinkRecord {
            family: 64,
            stratum: "p2",
            dagger: Some("z^2s"),
            curve: "S ∩ T for S = (x = 0), T = (y = 0)",
            product: kaw([(1, 1), (1, 6), (2, 2)], 1),
        },
        BadLinkRecord {
            family: 65,
            stratum: "p2,5",
            dagger: Some("z^3s"),
            curve: "S ∩ T for S = (x = 0), T = (y = 0)",
            product: kaw([(1, 1), (1, 1), (2, 2)], 1),
        },
        BadLinkRecord {
            family: 71,
            stratum: "p2",
            dagger: Some("z^2s"),
            curve: "(x = y = t = u = 0)",
            product: BadLinkProduct::Embedded(EmbeddedBlowupProduct {
                ambient: [1, 4, 5, 6, 7, 8],
                r: 5,
                weights: [6, 4, 1, 2, 3],
                factors: [(1, 1), (1, 6), (4, 4), (7, 2), (8, 3)],
            }),
        },
    ]
}

pub fn bad_link_record(family: u32, stratum: &str) -> Option<BadLinkRecord> {
    bad_link_records().into_iter().find(|r| r.family == family && r.stratum == stratum)
}

fn numbers_for(f: &FamilyRecord, p: &CenterAnnotation) -> Result<BlowupNumbers, String> {
    kawamata_numbers(&f.a3(), p.r, p.type_weights[1]).map_err(|e| e.to_string())
}

/// `(B · Γ)` for the recorded special curve.
pub fn bad_link_value(f: &FamilyRecord, p: &CenterAnnotation, rec: &BadLinkRecord) -> Result<Rational, String> {
    match &rec.product {
        BadLinkProduct::Kawamata { factors, divisor } => {
            let n = numbers_for(f, p)?;
            Ok(n.triple(*factors) / int(*divisor as i64))
        }
        BadLinkProduct::Embedded(e) => {
            if e.ambient != f.weights || e.r != p.r {
                return Err(format!("embedded blowup data does not describe family {} {}", f.id, p.stratum_label()));
            }
            Ok(embedded_product(e))
        }
    }
}

fn bad_link_certificate(f: &FamilyRecord, p: &CenterAnnotation, prefix: &str) -> Certificate {
    match bad_link_record(f.id, &p.stratum_label()) {
        None => Certificate::fact(format!("{prefix}no special curve recorded"), false),
        Some(rec) => match bad_link_value(f, p, &rec) {
            Ok(v) => Certificate::compare(&format!("{prefix}(B · Γ) on {}", rec.curve), v, Rel::Lt, "", &Rational::zero()),
            Err(e) => Certificate::fact(format!("{prefix}{e}"), false),
        },
    }
}

/// Options for singular point classification.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SingularOptions {
    /// Also run the symbolic identities of involutions and links with this seed.
    pub symbolic: Option<CoefficientSeed>,
}

/// Verdict for one annotated center, using only its primary method.
pub fn classify_center(f: &FamilyRecord, p: &CenterAnnotation, opts: SingularOptions) -> CenterVerdict {
    let center = CenterKind::Singular {
        stratum: p.stratum_label(),
        point_type: p.type_string(),
        count: p.count,
        spurious: p.spurious,
        dagger: p.dagger.clone(),
    };
    let method = p.method.to_string();
    let mut certificates = Vec::new();
    let decision = match &p.method {
        MethodTag::TestClass { b, e } => {
            let t = TestClass { b: *b, e: *e };
            certificates.push(Certificate::fact(
                format!("b = {b} > r e = {}", p.r * e),
                *b > p.r * e,
            ));
            match numbers_for(f, p).and_then(|n| test_class_value(&n, t).map_err(|e| e.to_string())) {
                Ok(v) => certificates.push(Certificate::compare("(M · B^2)", v, Rel::Le, "", &Rational::zero())),
                Err(e) => certificates.push(Certificate::fact(e, false)),
            }
            Decision::Excluded(ExclusionMethod::TestClass)
        }
        MethodTag::Cone { .. } => {
            match numbers_for(f, p) {
                Ok(n) => certificates.push(Certificate::compare("B^3", n.b3, Rel::Le, "", &Rational::zero())),
                Err(e) => certificates.push(Certificate::fact(e, false)),
            }
            Decision::Excluded(ExclusionMethod::Cone)
        }
        MethodTag::BadLink => {
            certificates.push(bad_link_certificate(f, p, ""));
            Decision::Excluded(ExclusionMethod::BadLink)
        }
        MethodTag::Qi | MethodTag::Ei => {
            let kind = if p.method == MethodTag::Qi { InvolutionKind::Qi } else { InvolutionKind::Ei };
            match involution_numerology(f, p, kind) {
                Ok(s) => {
                    certificates.push(Certificate::fact(format!("{}; {}", s.assignment(), s.z_string()), true));
                    if let Some(seed) = opts.symbolic {
                        let rep = match kind {
                            InvolutionKind::Qi => verify_qi_identities(f, &s, seed, Corruption::default()),
                            InvolutionKind::Ei => verify_ei_identities(f, &s, seed, Corruption::default()),
                        };
                        certificates.extend(Certificate::from_identities("", &rep));
                    }
                }
                Err(e) => certificates.push(Certificate::fact(e.to_string(), false)),
            }
            Decision::Involution(kind)
        }
        MethodTag::FanoLink { degree, weights } => {
            match fano_link_target(f, p) {
                Ok(s) => {
                    certificates.push(Certificate::fact(
                        format!("constructed {} against table X'_{degree}", s.target_string()),
                        s.matches(*degree, weights),
                    ));
                    if let Some(seed) = opts.symbolic {
                        let rep = verify_link_equations(f, &s, seed, Corruption::default());
                        certificates.extend(Certificate::from_identities("", &rep));
                    }
                    Decision::Link(LinkTarget::Fano { degree: s.target_degree, weights: s.target_weights })
                }
                Err(e) => {
                    certificates.push(Certificate::fact(e.to_string(), false));
                    Decision::Link(LinkTarget::Fano { degree: *degree, weights: *weights })
                }
            }
        }
        MethodTag::DpLink { k } => match dp_link_degree(f, p) {
            Ok(s) => {
                certificates.push(Certificate::fact(format!("fiber degree k = {} against table {k}", s.k), s.k == *k));
                if let Some(seed) = opts.symbolic {
                    let rep = verify_dp_link(f, &s, seed, Corruption::default());
                    certificates.extend(Certificate::from_identities("", &rep));
                }
                Decision::Link(LinkTarget::DelPezzo { k: s.k })
            }
            Err(e) => {
                certificates.push(Certificate::fact(e.to_string(), false));
                Decision::Link(LinkTarget::DelPezzo { k: *k })
            }
        },
    };
    CenterVerdict { center, method, decision, certificates }
}

/// Branch taken when the dagger monomial is absent: the bad-link number.
pub fn dagger_fallback(f: &FamilyRecord, p: &CenterAnnotation) -> Result<CenterVerdict, CenterError> {
    let monomial = p
        .dagger
        .clone()
        .ok_or_else(|| CenterError::NoDagger { family: f.id, point: p.stratum_label() })?;
    Ok(CenterVerdict {
        center: CenterKind::Singular {
            stratum: p.stratum_label(),
            point_type: p.type_string(),
            count: p.count,
            spurious: p.spurious,
            dagger: Some(monomial.clone()),
        },
        method: format!("BAD_LINK without {monomial}"),
        decision: Decision::Excluded(ExclusionMethod::BadLink),
        certificates: vec![bad_link_certificate(f, p, "")],
    })
}

/// Compares the computed basket with the corrected table rows.
pub fn check_basket(f: &FamilyRecord, ann: &TableAnnotation) -> Result<(), CenterError> {
    let mut computed: Vec<(Vec<usize>, u32, [u32; 3], u64)> = basket(f)?
        .into_iter()
        .map(|p| (p.indices.clone(), p.r, p.kind.weights(), p.count))
        .collect();
    let mut table: Vec<(Vec<usize>, u32, [u32; 3], u64)> =
        ann.points().map(|p| (p.indices.clone(), p.r, p.type_weights, p.count as u64)).collect();
    computed.sort();
    table.sort();
    if computed != table {
        return Err(CenterError::BasketMismatch {
            family: f.id,
            detail: format!("computed {computed:?}, table {table:?}"),
        });
    }
    Ok(())
}

/// One verdict per table row, spurious rows included. For dagger rows the
/// fallback certificate is appended to the primary one.
pub fn classify_singular(
    f: &FamilyRecord,
    ann: &TableAnnotation,
    opts: SingularOptions,
) -> Result<Vec<CenterVerdict>, CenterError> {
    check_basket(f, ann)?;
    Ok(ann
        .centers
        .iter()
        .map(|p| {
            let mut v = classify_center(f, p, opts);
            if let Some(m) = &p.dagger {
                v.certificates.push(bad_link_certificate(f, p, &format!("without {m}: ")));
            }
            v
        })
        .collect())
}

/// Valid test classes `bB + eE` with `b <= 2 d2`, `e <= b/r` and `(M · B^2) <= 0`.
pub fn search_test_classes(f: &FamilyRecord, p: &CenterAnnotation) -> Vec<(TestClass, Rational)> {
    let Ok(n) = numbers_for(f, p) else { return Vec::new() };
    let mut out = Vec::new();
    for b in 1..=2 * f.degrees[1] {
        for e in 0..=b / p.r {
            let t = TestClass { b, e };
            if let Ok(v) = test_class_value(&n, t) {
                if !v.is_positive() {
                    out.push((t, v));
                }
            }
        }
    }
    out
}

// Verdicts

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Rigid,
    NonrigidFano(LinkTarget),
    NonrigidDp(u32),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Rigid => f.write_str("RIGID"),
            Verdict::NonrigidFano(t) => write!(f, "NONRIGID_FANO {t}"),
            Verdict::NonrigidDp(k) => write!(f, "NONRIGID_DP({k})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Rigid iff no real center is a link; otherwise the common link target.
pub fn rigidity_verdict(f: &FamilyRecord, verdicts: &[CenterVerdict]) -> Result<Verdict, CenterError> {
    let mut targets: Vec<LinkTarget> = Vec::new();
    for v in verdicts {
        if matches!(v.center, CenterKind::Singular { spurious: true, .. }) {
            continue;
        }
        if let Decision::Link(t) = &v.decision {
            if !targets.iter().any(|u| u.same_as(t)) {
                targets.push(t.clone());
            }
        }
    }
    match targets.as_slice() {
        [] => Ok(Verdict::Rigid),
        [LinkTarget::DelPezzo { k }] => Ok(Verdict::NonrigidDp(*k)),
        [t @ LinkTarget::Fano { .. }] => Ok(Verdict::NonrigidFano(t.clone())),
        _ => Err(CenterError::InconsistentTargets {
            family: f.id,
            targets: targets.iter().map(|t| t.to_string()).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Database;

    fn fam(db: &Database, id: u32) -> &FamilyRecord {
        &db.get(id).unwrap().0
    }

    #[test]
    fn curves() {
        let db = Database::shipped();
        let v = classify_curves(fam(&db, 14));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].decision, Decision::Excluded(ExclusionMethod::DegreeBound));
        assert!(v[0].verified());
        let v = classify_curves(fam(&db, 5));
        assert_eq!(v[0].certificates[0].value, Some(int(-1)));
        let v = classify_curves(fam(&db, 4));
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].decision, Decision::Excluded(ExclusionMethod::PaperGeometric));
        let vals: Vec<_> = v[1].certificates.iter().map(|c| c.value.clone().unwrap()).collect();
        assert_eq!(vals, vec![int(-2), int(0)]);
        for id in [6, 7, 9, 11] {
            let v = classify_curves(fam(&db, id));
            assert!(v.iter().all(|c| c.verified()), "family {id}");
        }
    }

    #[test]
    fn isolating_degrees() {
        let w = [1, 2, 3, 4, 5, 8];
        assert_eq!(isolating_degree(&w, 0, None), 8);
        assert_eq!(isolating_degree(&w, 1, None), 10);
        assert_eq!(isolating_degree(&w, 1, Some(4)), 8);
    }

    #[test]
    fn cases() {
        let db = Database::shipped();
        for (id, case) in [(5, 3), (16, 5), (38, 2)] {
            let v = classify_nonsingular(fam(&db, id)).unwrap();
            assert_eq!(v.center, CenterKind::Nonsingular { label: CaseLabel::Case(case) });
            assert!(v.verified());
        }
        let case3 = [5, 7, 13, 17, 19, 23, 29, 30, 34, 41, 42, 49, 55, 65, 69, 72, 74, 77];
        let case5 = [16, 18, 21, 22, 25, 26, 28, 32, 33, 36, 40, 48, 54, 61];
        let mut counts = [0usize; 6];
        for f in db.families().filter(|f| f.id > 3 && !SPECIAL_FAMILIES.contains(&f.id)) {
            let c = nonsingular_case(f).unwrap();
            counts[c as usize] += 1;
            assert_eq!(case3.contains(&f.id), c == 3, "family {}", f.id);
            assert_eq!(case5.contains(&f.id), c == 5, "family {}", f.id);
        }
        assert_eq!(&counts[1..], &[31, 11, 18, 4, 14]);
    }

    #[test]
    fn special_identities() {
        let db = Database::shipped();
        for id in [4, 6, 9] {
            let ids = special_surface_identities(fam(&db, id)).unwrap();
            assert!(ids.iter().all(|i| i.holds && i.positive), "family {id}");
            for k in 0..4 {
                let bad = special_surface_checks(fam(&db, id), IdentityForm::Displayed, Some(k)).unwrap();
                assert!(!bad.last().unwrap().holds);
            }
        }
        let f11 = fam(&db, 11);
        let shown = special_surface_identities(f11).unwrap();
        let last = shown.last().unwrap();
        assert!(!last.holds);
        let expected = Poly::parse(last.difference.ring(), "-9/10 alpha^2", |_| None).unwrap();
        assert_eq!(last.difference, expected);
        let fixed = special_surface_checks(f11, IdentityForm::Corrected, None).unwrap();
        assert!(fixed.iter().all(|i| i.holds && i.positive));
    }

    #[test]
    fn singular_examples() {
        let db = Database::shipped();
        let (f, ann) = db.get(19).unwrap();
        let v = classify_singular(f, ann, SingularOptions::default()).unwrap();
        let cone = v.iter().find(|c| c.method == "CONE(1)").unwrap();
        assert_eq!(cone.certificates[0].value, Some(int(0)));
        let (f, ann) = db.get(69).unwrap();
        let v = classify_singular(f, ann, SingularOptions::default()).unwrap();
        let bl = v.iter().find(|c| c.method == "BAD_LINK").unwrap();
        assert_eq!(bl.certificates[0].value, Some(rat(-1, 9)));
        let (f, ann) = db.get(14).unwrap();
        let v = classify_singular(f, ann, SingularOptions::default()).unwrap();
        assert!(v.iter().all(|c| c.verified()));
    }

    #[test]
    fn dagger_values() {
        let db = Database::shipped();
        let expect = [(30, rat(-1, 5)), (40, rat(-2, 9)), (64, rat(-2, 7)), (65, rat(-1, 6)), (71, rat(-1, 6))];
        for (id, val) in expect {
            let (f, ann) = db.get(id).unwrap();
            let p = ann.points().find(|p| p.dagger.is_some()).unwrap();
            let v = dagger_fallback(f, p).unwrap();
            assert_eq!(v.certificates[0].value, Some(val), "family {id}");
            assert!(v.verified());
        }
    }

    #[test]
    fn verdicts() {
        let db = Database::shipped();
        let verdict = |id: u32| {
            let (f, ann) = db.get(id).unwrap();
            let v = classify_singular(f, ann, SingularOptions::default()).unwrap();
            rigidity_verdict(f, &v).unwrap()
        };
        assert_eq!(verdict(8), Verdict::Rigid);
        assert_eq!(verdict(4), Verdict::NonrigidDp(2));
        assert_eq!(verdict(57).to_string(), "NONRIGID_FANO X'_14 in P(1,2,3,7,2)");
    }

    #[test]
    fn search_finds_annotated_class() {
        let db = Database::shipped();
        let (f, ann) = db.get(24).unwrap();
        for p in ann.points() {
            if let MethodTag::TestClass { b, e } = p.method {
                assert!(search_test_classes(f, p).iter().any(|(t, _)| t.b == b && t.e == e));
            }
        }
    }
}
