//! The bundled dataset of 53 sets (151 forms) of inequivalent ternary forms
//! with identical representation sets, and verification of its rows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::arith::{parse_rat, Rat};
use crate::error::{Error, Result};
use crate::forms::IntForm;
use crate::reps::{compare_rep_sets, representations_up_to, RepComparison};

const BUNDLED: &str = include_str!("../data/tables.txt");

pub const SET_COUNT: usize = 53;
pub const FORM_COUNT: usize = 151;

/// Regularity mark printed next to a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    /// The only class in its genus.
    SoleClass,
    Regular,
    /// Regular assuming the generalized Riemann hypothesis.
    RegularConditional,
    None,
}

impl FromStr for Mark {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "**" => Ok(Mark::SoleClass),
            "*" => Ok(Mark::Regular),
            "*!" => Ok(Mark::RegularConditional),
            "-" => Ok(Mark::None),
            _ => Err(Error::Data(format!("unknown mark {s:?}"))),
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::SoleClass => "**",
            Mark::Regular => "*",
            Mark::RegularConditional => "*!",
            Mark::None => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub form: IntForm,
    /// Printed Gram determinant.
    pub determinant: Rat,
    /// Printed ratio: determinants within a set are proportional to these.
    pub ratio: BigInt,
    pub mark: Mark,
    pub bravais: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSet {
    pub number: usize,
    pub rows: Vec<TableRow>,
    /// Values represented by the genus but not by these forms, as printed.
    pub genus_gap: String,
}

impl TableSet {
    pub fn forms(&self) -> Vec<IntForm> {
        self.rows.iter().map(|r| r.form.clone()).collect()
    }

    pub fn max_s33(&self) -> BigInt {
        self.rows.iter().map(|r| r.form.coeff(2, 2).clone()).max().expect("nonempty set")
    }
}

/// Parses the dataset text and checks its digest and counts.
pub fn parse_dataset(text: &str) -> Result<Vec<TableSet>> {
    let mut digest_line = None;
    let mut body = String::new();
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if let Some(d) = line.strip_prefix("@sha256 ") {
            digest_line = Some(d.trim().to_string());
            continue;
        }
        body.push_str(line);
        body.push('\n');
    }
    let expected = digest_line.ok_or_else(|| Error::Data("missing @sha256 line".into()))?;
    let actual: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    if actual != expected {
        return Err(Error::Data(format!("checksum mismatch: expected {expected}, computed {actual}")));
    }
    let mut sets: BTreeMap<usize, TableSet> = BTreeMap::new();
    fn entry(sets: &mut BTreeMap<usize, TableSet>, n: usize) -> &mut TableSet {
        sets.entry(n).or_insert_with(|| TableSet { number: n, rows: Vec::new(), genus_gap: String::new() })
    }
    for (lineno, line) in body.lines().enumerate() {
        let bad = |what: &str| Error::Data(format!("line {}: {what}: {line:?}", lineno + 1));
        if let Some(rest) = line.strip_prefix("@gap ") {
            let (n, gap) = rest.split_once('|').ok_or_else(|| bad("malformed gap line"))?;
            let n: usize = n.trim().parse().map_err(|_| bad("bad set number"))?;
            entry(&mut sets, n).genus_gap = gap.trim().to_string();
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        if cols.len() != 6 {
            return Err(bad("expected six columns"));
        }
        let n: usize = cols[0].parse().map_err(|_| bad("bad set number"))?;
        let form: IntForm = cols[1].parse().map_err(|_| bad("bad form"))?;
        if form.dim() != 3 {
            return Err(bad("not a ternary form"));
        }
        let row = TableRow {
            form,
            determinant: parse_rat(cols[2]).map_err(|_| bad("bad determinant"))?,
            ratio: cols[3].parse().map_err(|_| bad("bad ratio"))?,
            mark: cols[4].parse()?,
            bravais: cols[5].to_string(),
        };
        entry(&mut sets, n).rows.push(row);
    }
    let sets: Vec<TableSet> = sets.into_values().collect();
    let forms: usize = sets.iter().map(|s| s.rows.len()).sum();
    if sets.len() != SET_COUNT || forms != FORM_COUNT {
        return Err(Error::Data(format!("expected {SET_COUNT} sets and {FORM_COUNT} forms, found {} and {forms}", sets.len())));
    }
    if sets.iter().enumerate().any(|(i, s)| s.number != i + 1) {
        return Err(Error::Data("set numbers must run from 1 to 53".into()));
    }
    for s in &sets {
        for r in &s.rows {
            if !r.form.is_positive_definite() || !r.form.is_primitive() {
                return Err(Error::Data(format!("set {}: {} is not primitive positive-definite", s.number, r.form)));
            }
        }
    }
    Ok(sets)
}

/// The bundled dataset.
pub fn table_dataset() -> Result<Vec<TableSet>> {
    parse_dataset(BUNDLED)
}

/// Dataset from a file, with the same checks as the bundled copy.
pub fn load_dataset(path: &std::path::Path) -> Result<Vec<TableSet>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub comparison: RepComparison,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetReport {
    pub number: usize,
    pub bound: u64,
    /// Representation comparisons of every member against the first.
    pub pairs: Vec<PairCheck>,
    /// Gram determinants recomputed from the forms.
    pub determinants: Vec<Rat>,
    pub determinants_match: bool,
    /// det_i · ratio_j = det_j · ratio_i for all members.
    pub ratios_match: bool,
}

impl SetReport {
    pub fn passed(&self) -> bool {
        self.determinants_match && self.ratios_match && self.pairs.iter().all(|p| p.comparison.equal())
    }
}

/// Compares all members' representation sets up to `bound` and recomputes
/// the printed determinants and ratios. Equality of sets is transitive, so
/// comparing each member with the first covers every pair.
pub fn verify_table_set(set: &TableSet, bound: u64) -> Result<SetReport> {
    let reps = set
        .rows
        .par_iter()
        .map(|r| representations_up_to(&r.form, bound))
        .collect::<Result<Vec<_>>>()?;
    let pairs = (1..reps.len())
        .map(|j| PairCheck { first: 0, second: j, comparison: compare_rep_sets(&reps[0], &reps[j]) })
        .collect();
    let determinants: Vec<Rat> = set.rows.iter().map(|r| r.form.gram_determinant()).collect();
    let determinants_match = determinants.iter().zip(&set.rows).all(|(d, r)| *d == r.determinant);
    let ratios_match = set.rows.iter().all(|ri| {
        set.rows.iter().all(|rj| {
            &ri.determinant * Rat::from_integer(rj.ratio.clone()) == &rj.determinant * Rat::from_integer(ri.ratio.clone())
        })
    });
    Ok(SetReport { number: set.number, bound, pairs, determinants, determinants_match, ratios_match })
}

pub fn find_set(sets: &[TableSet], number: usize) -> Result<&TableSet> {
    sets.iter()
        .find(|s| s.number == number)
        .ok_or_else(|| Error::InvalidArgument(format!("no set numbered {number} (valid: 1..={SET_COUNT})")))
}
