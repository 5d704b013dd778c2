//! Family records, weighted projective spaces and the curated family database.

use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::rational::{gcd_u64, parse_rational, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family {id}: weights sum minus degrees is {excess}, expected 1")]
    NotAnticanonical { id: u32, excess: i64 },
    #[error("family {id}: {msg}")]
    Invalid { id: u32, msg: String },
    #[error("degree {degree} does not transform integrally under division by {factor}")]
    NonIntegralDegree { degree: u32, factor: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

/// A codimension-2 weighted complete intersection `X_{d1,d2} ⊂ P(a0,...,a5)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyRecord {
    pub id: u32,
    pub weights: [u32; 6],
    pub degrees: [u32; 2],
}

impl FamilyRecord {
    /// Sorts weights and degrees and checks the anticanonical condition.
    pub fn new(id: u32, mut weights: [u32; 6], mut degrees: [u32; 2]) -> Result<Self, FamilyError> {
        weights.sort_unstable();
        degrees.sort_unstable();
        if weights[0] == 0 || degrees[0] == 0 {
            return Err(FamilyError::Invalid { id, msg: "weights and degrees must be positive".into() });
        }
        let f = FamilyRecord { id, weights, degrees };
        if !check_anticanonical(&f) {
            return Err(FamilyError::NotAnticanonical { id, excess: f.excess() });
        }
        Ok(f)
    }

    /// Unchecked constructor, used when scanning candidate tuples.
    pub fn raw(id: u32, weights: [u32; 6], degrees: [u32; 2]) -> Self {
        FamilyRecord { id, weights, degrees }
    }

    fn excess(&self) -> i64 {
        self.weights.iter().map(|&a| a as i64).sum::<i64>() - self.degrees.iter().map(|&d| d as i64).sum::<i64>()
    }

    pub fn a3(&self) -> Rational {
        anticanonical_degree(self)
    }

    /// Coordinate names: one letter per group of equal weights, indexed within a repeated group.
    pub fn coordinate_names(&self) -> Vec<String> {
        coordinate_names(&self.weights)
    }
}

impl fmt::Display for FamilyRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        write!(f, "No.{} X_{{{},{}}} in P({})", self.id, self.degrees[0], self.degrees[1], w.join(","))
    }
}

pub fn coordinate_names(weights: &[u32]) -> Vec<String> {
    const LETTERS: [&str; 6] = ["x", "y", "z", "s", "t", "u"];
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &a in weights {
        match groups.last_mut() {
            Some((w, n)) if *w == a => *n += 1,
            _ => groups.push((a, 1)),
        }
    }
    let mut out = Vec::new();
    for (g, &(_, n)) in groups.iter().enumerate() {
        for k in 0..n {
            if n > 1 {
                out.push(format!("{}{}", LETTERS[g], k));
            } else {
                out.push(LETTERS[g].to_string());
            }
        }
    }
    out
}

/// `d1 d2 / (a0 ... a5)`.
pub fn anticanonical_degree(f: &FamilyRecord) -> Rational {
    let num: i64 = f.degrees.iter().map(|&d| d as i64).product();
    let den: i64 = f.weights.iter().map(|&a| a as i64).product();
    rat(num, den)
}

pub fn check_anticanonical(f: &FamilyRecord) -> bool {
    f.excess() == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedSpace {
    pub weights: Vec<u32>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<u32>) -> Self {
        WeightedSpace { weights }
    }

    pub fn is_well_formed(&self) -> bool {
        let n = self.weights.len();
        if n < 2 {
            return true;
        }
        (0..n).all(|i| gcd_except(&self.weights, i) == 1)
    }

    pub fn dim(&self) -> usize {
        self.weights.len().saturating_sub(1)
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        write!(f, "P({})", w.join(","))
    }
}

fn gcd_all(ws: &[u32]) -> u32 {
    ws.iter().fold(0u64, |g, &w| gcd_u64(g, w as u64)) as u32
}

fn gcd_except(ws: &[u32], i: usize) -> u32 {
    ws.iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .fold(0u64, |g, (_, &w)| gcd_u64(g, w as u64)) as u32
}

/// Result of well-forming: the new space, the new degrees and every division factor applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormed {
    pub space: WeightedSpace,
    pub degrees: Vec<u32>,
    pub factors: Vec<u32>,
}

/// Divides out the common factor of all weights, then each common factor of
/// all-but-one weights, dividing degrees accordingly.
pub fn well_form(space: &WeightedSpace, degrees: &[u32]) -> Result<WellFormed, FamilyError> {
    let mut w = space.weights.clone();
    let mut d = degrees.to_vec();
    let mut factors = Vec::new();
    let g = gcd_all(&w);
    if g > 1 {
        for x in &mut d {
            if *x % g != 0 {
                return Err(FamilyError::NonIntegralDegree { degree: *x, factor: g });
            }
            *x /= g;
        }
        for x in &mut w {
            *x /= g;
        }
        factors.push(g);
    }
    if w.len() >= 2 {
        loop {
            let mut changed = false;
            for i in 0..w.len() {
                let q = gcd_except(&w, i);
                if q > 1 {
                    for x in &mut d {
                        if *x % q != 0 {
                            return Err(FamilyError::NonIntegralDegree { degree: *x, factor: q });
                        }
                        *x /= q;
                    }
                    for (k, x) in w.iter_mut().enumerate() {
                        if k != i {
                            *x /= q;
                        }
                    }
                    factors.push(q);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(WellFormed { space: WeightedSpace::new(w), degrees: d, factors })
}

/// Exclusion or link method named in the table for one center.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum MethodTag {
    TestClass { b: u32, e: u32 },
    Cone { m: u32 },
    BadLink,
    Qi,
    Ei,
    FanoLink { degree: u32, weights: [u32; 5] },
    DpLink { k: u32 },
}

impl MethodTag {
    pub fn parse(s: &str) -> Option<MethodTag> {
        let (head, args) = match s.split_once('(') {
            Some((h, rest)) => (h, Some(rest.strip_suffix(')')?)),
            None => (s, None),
        };
        let nums = |a: &str| -> Option<Vec<u32>> { a.split(',').map(|x| x.trim().parse().ok()).collect() };
        match (head, args) {
            ("TEST_CLASS", Some(a)) => {
                let v = nums(a)?;
                (v.len() == 2).then(|| MethodTag::TestClass { b: v[0], e: v[1] })
            }
            ("CONE", Some(a)) => Some(MethodTag::Cone { m: a.trim().parse().ok()? }),
            ("BAD_LINK", None) => Some(MethodTag::BadLink),
            ("QI", None) => Some(MethodTag::Qi),
            ("EI", None) => Some(MethodTag::Ei),
            ("FANO_LINK", Some(a)) => {
                let (d, ws) = a.split_once(';')?;
                let v = nums(ws)?;
                let weights: [u32; 5] = v.try_into().ok()?;
                Some(MethodTag::FanoLink { degree: d.trim().parse().ok()?, weights })
            }
            ("DP_LINK", Some(a)) => Some(MethodTag::DpLink { k: a.trim().parse().ok()? }),
            _ => None,
        }
    }

    pub fn is_link(&self) -> bool {
        matches!(self, MethodTag::FanoLink { .. } | MethodTag::DpLink { .. })
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodTag::TestClass { b, e } => write!(f, "TEST_CLASS({b},{e})"),
            MethodTag::Cone { m } => write!(f, "CONE({m})"),
            MethodTag::BadLink => write!(f, "BAD_LINK"),
            MethodTag::Qi => write!(f, "QI"),
            MethodTag::Ei => write!(f, "EI"),
            MethodTag::FanoLink { degree, weights } => {
                let w: Vec<String> = weights.iter().map(|a| a.to_string()).collect();
                write!(f, "FANO_LINK({degree};{})", w.join(","))
            }
            MethodTag::DpLink { k } => write!(f, "DP_LINK({k})"),
        }
    }
}

/// Fields of a center line exactly as printed, kept when a correction applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedRow {
    pub indices: Vec<usize>,
    pub r: u32,
    pub type_weights: [u32; 3],
    pub count: u32,
}

/// One center line of the table, with corrections applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterAnnotation {
    pub indices: Vec<usize>,
    pub r: u32,
    pub type_weights: [u32; 3],
    pub count: u32,
    /// Present when a field was misprinted.
    pub printed: Option<PrintedRow>,
    /// Printed row that corresponds to no point of a general member.
    pub spurious: bool,
    pub method: MethodTag,
    pub sections: Option<String>,
    pub sharp: bool,
    pub conditions: Vec<String>,
    pub dagger: Option<String>,
    pub prior: bool,
}

impl CenterAnnotation {
    pub fn type_string(&self) -> String {
        format!("1/{}({},{},{})", self.r, self.type_weights[0], self.type_weights[1], self.type_weights[2])
    }

    pub fn stratum_label(&self) -> String {
        let v: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("p{}", v.join(","))
    }

    /// The row as printed, ignoring corrections.
    pub fn as_printed(&self) -> PrintedRow {
        self.printed.clone().unwrap_or_else(|| PrintedRow {
            indices: self.indices.clone(),
            r: self.r,
            type_weights: self.type_weights,
            count: self.count,
        })
    }
}

impl TableAnnotation {
    /// Rows describing actual points, with corrections applied.
    pub fn points(&self) -> impl Iterator<Item = &CenterAnnotation> {
        self.centers.iter().filter(|c| !c.spurious)
    }
}

/// The table's printed nonsingular-point label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PrintedCase {
    Case(u8),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableAnnotation {
    pub id: u32,
    pub centers: Vec<CenterAnnotation>,
    pub case: PrintedCase,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub a3: Rational,
}

#[derive(Debug, Clone)]
pub struct Database {
    pub entries: Vec<(FamilyRecord, TableAnnotation)>,
}

pub const SHIPPED_DATABASE: &str = include_str!("../data/families.db");

impl Database {
    pub fn shipped() -> Database {
        parse_database(SHIPPED_DATABASE).expect("shipped database parses")
    }

    pub fn get(&self, id: u32) -> Option<&(FamilyRecord, TableAnnotation)> {
        self.entries.iter().find(|(f, _)| f.id == id)
    }

    pub fn families(&self) -> impl Iterator<Item = &FamilyRecord> {
        self.entries.iter().map(|(f, _)| f)
    }
}

/// Loads and validates the database at `path`.
pub fn load_database(path: &Path) -> Result<Database, FamilyError> {
    let text = std::fs::read_to_string(path).map_err(|e| FamilyError::Io(format!("{}: {e}", path.display())))?;
    parse_database(&text)
}

fn parse_list(s: &str, line: usize) -> Result<Vec<u32>, FamilyError> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| FamilyError::Parse { line, msg: format!("bad integer `{x}`") }))
        .collect()
}

fn parse_type(s: &str, line: usize) -> Result<(u32, [u32; 3]), FamilyError> {
    let bad = || FamilyError::Parse { line, msg: format!("bad type `{s}`") };
    let rest = s.strip_prefix("1/").ok_or_else(bad)?;
    let (r, ws) = rest.split_once('(').ok_or_else(bad)?;
    let ws = ws.strip_suffix(')').ok_or_else(bad)?;
    let r: u32 = r.parse().map_err(|_| bad())?;
    let v = parse_list(ws, line)?;
    let t: [u32; 3] = v.try_into().map_err(|_| bad())?;
    Ok((r, t))
}

fn parse_point(rest: &str, line: usize) -> Result<CenterAnnotation, FamilyError> {
    let bad = |msg: &str| FamilyError::Parse { line, msg: msg.to_string() };
    let toks: Vec<&str> = rest.split_whitespace().collect();
    let mut it = toks.iter().peekable();
    let indices: Vec<usize> = parse_list(it.next().ok_or_else(|| bad("missing indices"))?, line)?
        .into_iter()
        .map(|i| i as usize)
        .collect();
    if indices.iter().any(|&i| i > 5) {
        return Err(bad("index out of range"));
    }
    let mut r = None;
    let mut count = None;
    let mut method = None;
    let mut sections = None;
    let mut sharp = false;
    let mut conditions = Vec::new();
    let mut dagger = None;
    let mut prior = false;
    let mut spurious = false;
    let mut fix_indices = None;
    let mut fix_type = None;
    let mut fix_count = None;
    while let Some(&tok) = it.next() {
        match tok {
            "type" => r = Some(parse_type(it.next().ok_or_else(|| bad("missing type"))?, line)?),
            "count" => {
                count = Some(
                    it.next().ok_or_else(|| bad("missing count"))?.parse::<u32>().map_err(|_| bad("bad count"))?,
                )
            }
            "method" => {
                let m = it.next().ok_or_else(|| bad("missing method"))?;
                method = Some(MethodTag::parse(m).ok_or_else(|| bad(&format!("unknown method `{m}`")))?);
            }
            "sections" => sections = Some(it.next().ok_or_else(|| bad("missing sections"))?.to_string()),
            "sharp" => sharp = true,
            "dagger" => dagger = Some(it.next().ok_or_else(|| bad("missing dagger monomial"))?.to_string()),
            "prior" => prior = true,
            "spurious" => spurious = true,
            "corrected-indices" => {
                let v = parse_list(it.next().ok_or_else(|| bad("missing corrected indices"))?, line)?;
                fix_indices = Some(v.into_iter().map(|i| i as usize).collect::<Vec<_>>());
            }
            "corrected-type" => fix_type = Some(parse_type(it.next().ok_or_else(|| bad("missing corrected type"))?, line)?),
            "corrected-count" => {
                fix_count = Some(
                    it.next()
                        .ok_or_else(|| bad("missing corrected count"))?
                        .parse::<u32>()
                        .map_err(|_| bad("bad corrected count"))?,
                )
            }
            c if c.starts_with('C') && c[1..].parse::<u32>().is_ok() => conditions.push(c.to_string()),
            other => return Err(bad(&format!("unexpected token `{other}`"))),
        }
    }
    let (r, type_weights) = r.ok_or_else(|| bad("missing type"))?;
    let count = count.ok_or_else(|| bad("missing count"))?;
    let printed = (fix_indices.is_some() || fix_type.is_some() || fix_count.is_some())
        .then(|| PrintedRow { indices: indices.clone(), r, type_weights, count });
    let (r, type_weights) = fix_type.unwrap_or((r, type_weights));
    Ok(CenterAnnotation {
        indices: fix_indices.unwrap_or(indices),
        r,
        type_weights,
        count: fix_count.unwrap_or(count),
        printed,
        spurious,
        method: method.ok_or_else(|| bad("missing method"))?,
        sections,
        sharp,
        conditions,
        dagger,
        prior,
    })
}

/// Parses database text. Requires exactly 85 valid families with ids 1..=85.
pub fn parse_database(text: &str) -> Result<Database, FamilyError> {
    let mut entries: Vec<(FamilyRecord, TableAnnotation)> = Vec::new();
    let mut current: Option<(FamilyRecord, TableAnnotation, bool, usize)> = None;
    let finish = |cur: Option<(FamilyRecord, TableAnnotation, bool, usize)>,
                  entries: &mut Vec<(FamilyRecord, TableAnnotation)>|
     -> Result<(), FamilyError> {
        if let Some((f, a, has_case, line)) = cur {
            if !has_case {
                return Err(FamilyError::Parse { line, msg: format!("family {} has no case line", f.id) });
            }
            if a.a3.is_zero() {
                return Err(FamilyError::Parse { line, msg: format!("family {} has no a3 line", f.id) });
            }
            entries.push((f, a));
        }
        Ok(())
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("family ") {
            finish(current.take(), &mut entries)?;
            let parts: Vec<&str> = rest.split('|').map(|p| p.trim()).collect();
            if parts.len() != 3 {
                return Err(FamilyError::Parse { line, msg: "expected `family id | weights ... | degrees ...`".into() });
            }
            let id: u32 = parts[0].parse().map_err(|_| FamilyError::Parse { line, msg: "bad family id".into() })?;
            let w = parse_list(
                parts[1].strip_prefix("weights").ok_or(FamilyError::Parse { line, msg: "missing weights".into() })?,
                line,
            )?;
            let d = parse_list(
                parts[2].strip_prefix("degrees").ok_or(FamilyError::Parse { line, msg: "missing degrees".into() })?,
                line,
            )?;
            let w: [u32; 6] = w.try_into().map_err(|_| FamilyError::Parse { line, msg: "need six weights".into() })?;
            let d: [u32; 2] = d.try_into().map_err(|_| FamilyError::Parse { line, msg: "need two degrees".into() })?;
            let f = FamilyRecord::new(id, w, d)?;
            let ann = TableAnnotation { id, centers: Vec::new(), case: PrintedCase::None, a3: Rational::zero() };
            current = Some((f, ann, false, line));
        } else {
            let cur = current.as_mut().ok_or(FamilyError::Parse { line, msg: "line outside a family block".into() })?;
            if let Some(rest) = content.strip_prefix("point ") {
                cur.1.centers.push(parse_point(rest, line)?);
            } else if let Some(rest) = content.strip_prefix("case ") {
                cur.1.case = match rest.trim() {
                    "-" => PrintedCase::None,
                    n => PrintedCase::Case(
                        n.parse::<u8>()
                            .ok()
                            .filter(|c| (1..=5).contains(c))
                            .ok_or(FamilyError::Parse { line, msg: format!("bad case `{n}`") })?,
                    ),
                };
                cur.2 = true;
            } else if let Some(rest) = content.strip_prefix("a3 ") {
                cur.1.a3 = parse_rational(rest).ok_or(FamilyError::Parse { line, msg: format!("bad a3 `{rest}`") })?;
            } else {
                return Err(FamilyError::Parse { line, msg: format!("unrecognised line `{content}`") });
            }
        }
    }
    finish(current.take(), &mut entries)?;
    if entries.len() != 85 {
        return Err(FamilyError::Parse {
            line: text.lines().count(),
            msg: format!("expected 85 families, found {}", entries.len()),
        });
    }
    for (k, (f, _)) in entries.iter().enumerate() {
        if f.id as usize != k + 1 {
            return Err(FamilyError::Invalid { id: f.id, msg: format!("out of order, expected id {}", k + 1) });
        }
    }
    Ok(Database { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_of_anchor_families() {
        let f1 = FamilyRecord::new(1, [1; 6], [2, 3]).unwrap();
        assert_eq!(anticanonical_degree(&f1), rat(6, 1));
        let f4 = FamilyRecord::new(4, [1, 1, 1, 1, 2, 3], [4, 4]).unwrap();
        assert_eq!(f4.a3(), rat(8, 3));
        let f85 = FamilyRecord::new(85, [1, 8, 9, 10, 12, 15], [24, 30]).unwrap();
        assert_eq!(f85.a3(), rat(1, 180));
        assert!(!check_anticanonical(&FamilyRecord::raw(0, [1; 6], [2, 4])));
    }

    #[test]
    fn well_forming() {
        let w = well_form(&WeightedSpace::new(vec![2, 2, 4]), &[6, 8]).unwrap();
        assert_eq!(w.space.weights, vec![1, 1, 2]);
        assert_eq!(w.degrees, vec![3, 4]);
        let w = well_form(&WeightedSpace::new(vec![9, 12, 15]), &[24, 30]).unwrap();
        assert_eq!(w.space.weights, vec![3, 4, 5]);
        assert_eq!(w.degrees, vec![8, 10]);
        let w = well_form(&WeightedSpace::new(vec![1, 1, 2]), &[3, 4]).unwrap();
        assert!(w.factors.is_empty());
        assert!(well_form(&WeightedSpace::new(vec![4, 5, 6]), &[12, 15]).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(coordinate_names(&[1, 1, 2, 3, 4, 4]), ["x0", "x1", "y", "z", "s0", "s1"]);
        assert_eq!(coordinate_names(&[1, 4, 4, 5, 6, 7]), ["x", "y0", "y1", "z", "s", "t"]);
    }

    #[test]
    fn method_tags_roundtrip() {
        for s in ["TEST_CLASS(4,1)", "CONE(2)", "BAD_LINK", "QI", "EI", "FANO_LINK(14;1,2,3,7,2)", "DP_LINK(1)"] {
            assert_eq!(MethodTag::parse(s).unwrap().to_string(), s);
        }
        assert!(MethodTag::parse("FANO_LINK(14;1,2)").is_none());
    }
}
