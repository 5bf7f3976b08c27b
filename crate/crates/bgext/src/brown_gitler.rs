//! Brown-Gitler modules `J(n)`, finite sums of them, and the morphism
//! calculus between such sums.
//!
//! An entry `θ` from `J(n)` to `J(m)` stands for the map `•θ`. In internal
//! degree `d` it is realized as the transpose of `φ ↦ θφ` from `F(d)^m` to
//! `F(d)^n`. With that choice a path `f` then `g` composes to the word
//! `label(f) · label(g)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2_linalg::{rank, F2Matrix};
use crate::steenrod::{adem_reduce, admissible_basis, compose as sq_compose, Monomial, SteenrodOp};

/// Number of multisets of `m` powers of two summing to `n`.
pub fn dim_j(n: u32, m: u32) -> usize {
    fn count(n: u32, m: u32, max_pow: u32) -> usize {
        if m == 0 {
            return usize::from(n == 0);
        }
        if n < m {
            return 0;
        }
        let mut total = 0;
        let mut p = max_pow;
        loop {
            let v = 1u32 << p;
            if v <= n && v as u64 * m as u64 >= n as u64 {
                total += count(n - v, m - 1, p);
            }
            if p == 0 {
                break;
            }
            p -= 1;
        }
        total
    }
    if n == 0 {
        return usize::from(m == 0);
    }
    count(n, m, 31 - n.leading_zeros())
}

/// Adem-reduce `θ`, then drop admissibles acting trivially on classes of degree `m`.
pub fn truncate(theta: &SteenrodOp, m: u32) -> SteenrodOp {
    adem_reduce(theta).filter(|a| a.excess() <= m as i64)
}

/// Whether `•θ : J(n) → J(m)` is zero.
pub fn morphism_is_zero(theta: &SteenrodOp, n: u32, m: u32) -> bool {
    if let Some(d) = theta.degree() {
        assert!(n >= m && d == n - m, "•{theta} does not map J({n}) to J({m})");
    }
    truncate(theta, m).is_zero()
}

/// A finite direct sum of Brown-Gitler modules, summands sorted descending.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BGModule {
    summands: Vec<u32>,
}

impl BGModule {
    pub fn new(mut summands: Vec<u32>) -> Self {
        // sort_by is stable
        summands.sort_by(|a, b| b.cmp(a));
        BGModule { summands }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn j(n: u32) -> Self {
        BGModule { summands: vec![n] }
    }

    pub fn summands(&self) -> &[u32] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn count(&self, n: u32) -> usize {
        self.summands.iter().filter(|&&s| s == n).count()
    }

    /// Graded dimension in internal degree `d`.
    pub fn dim(&self, d: u32) -> usize {
        self.summands.iter().map(|&n| dim_j(n, d)).sum()
    }

    /// Offset of each summand's block in the degree-`d` realization.
    pub fn offsets(&self, d: u32) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.summands.len() + 1);
        let mut acc = 0;
        o.push(0);
        for &n in &self.summands {
            acc += dim_j(n, d);
            o.push(acc);
        }
        o
    }

    pub fn max_index(&self) -> u32 {
        self.summands.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for BGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (k, n) in self.summands.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "J({n})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BGError {
    #[error("cannot parse BG module {0:?}")]
    ParseModule(String),
    #[error("bad entry {0}")]
    Op(#[from] crate::steenrod::ParseOpError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({i},{j}) has degree {got:?}, expected {want}")]
    Degree { i: usize, j: usize, got: Option<u32>, want: i64 },
    #[error("d∘d is nonzero at position {0}")]
    NotComplex(usize),
}

impl FromStr for BGModule {
    type Err = BGError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(BGModule::zero());
        }
        let mut v = Vec::new();
        for part in s.split('+') {
            let n = part
                .trim()
                .strip_prefix("J(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.parse::<u32>().ok())
                .ok_or_else(|| BGError::ParseModule(s.to_string()))?;
            v.push(n);
        }
        Ok(BGModule::new(v))
    }
}

impl From<BGModule> for String {
    fn from(m: BGModule) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for BGModule {
    type Error = BGError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Matrix of operations, entry `(i, j)` going from source summand `j` to target summand `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BGMorphism {
    source: BGModule,
    target: BGModule,
    entries: Vec<Vec<SteenrodOp>>,
}

impl BGMorphism {
    pub fn zero(source: BGModule, target: BGModule) -> Self {
        let entries = vec![vec![SteenrodOp::zero(); source.len()]; target.len()];
        BGMorphism { source, target, entries }
    }

    pub fn identity(m: &BGModule) -> Self {
        let mut f = Self::zero(m.clone(), m.clone());
        for i in 0..m.len() {
            f.entries[i][i] = SteenrodOp::one();
        }
        f
    }

    /// Entries are normalized; degree mismatches are rejected.
    pub fn new(source: BGModule, target: BGModule, entries: Vec<Vec<SteenrodOp>>) -> Result<Self, BGError> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(BGError::Shape(format!("{} entries do not fit {source} → {target}", entries.len())));
        }
        let mut f = Self::zero(source, target);
        for (i, row) in entries.into_iter().enumerate() {
            for (j, e) in row.into_iter().enumerate() {
                f.set(i, j, e)?;
            }
        }
        Ok(f)
    }

    /// Single-entry morphism `•θ : J(n) → J(m)`.
    pub fn single(n: u32, m: u32, theta: SteenrodOp) -> Result<Self, BGError> {
        Self::new(BGModule::j(n), BGModule::j(m), vec![vec![theta]])
    }

    pub fn source(&self) -> &BGModule {
        &self.source
    }

    pub fn target(&self) -> &BGModule {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &SteenrodOp {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, theta: SteenrodOp) -> Result<(), BGError> {
        let n = self.source.summands[j];
        let m = self.target.summands[i];
        let want = n as i64 - m as i64;
        let t = truncate(&theta, m);
        if !t.is_zero() && t.degree() != Some(want as u32) {
            return Err(BGError::Degree { i, j, got: t.degree(), want });
        }
        // negative degree forces zero
        self.entries[i][j] = if want < 0 { SteenrodOp::zero() } else { t };
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(SteenrodOp::is_zero)
    }

    pub fn add(&self, other: &BGMorphism) -> Result<BGMorphism, BGError> {
        if self.source != other.source || self.target != other.target {
            return Err(BGError::Shape("sum of morphisms with different shapes".into()));
        }
        let mut out = self.clone();
        for (i, row) in other.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.entries[i][j].add_assign(e);
            }
        }
        Ok(out)
    }

    /// Nonzero entries as `(i, j, op)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &SteenrodOp)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(move |(j, e)| (i, j, e)))
    }
}

impl fmt::Display for BGMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} -> {}", self.source, self.target)?;
        for (i, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  J({}): [{}]", self.target.summands[i], cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BGMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `g ∘ f`: path order `f` then `g`, so entry words read `f`-label then `g`-label.
pub fn compose(g: &BGMorphism, f: &BGMorphism) -> Result<BGMorphism, BGError> {
    if f.target != g.source {
        return Err(BGError::Shape(format!("cannot compose {} -> {} after {} -> {}", g.source, g.target, f.source, f.target)));
    }
    let mut out = BGMorphism::zero(f.source.clone(), g.target.clone());
    for (i, grow) in g.entries.iter().enumerate() {
        let m = g.target.summands[i];
        for j in 0..f.source.len() {
            let mut acc = SteenrodOp::zero();
            for (u, ge) in grow.iter().enumerate() {
                if ge.is_zero() || f.entries[u][j].is_zero() {
                    continue;
                }
                acc.add_assign(&sq_compose(&f.entries[u][j], ge));
            }
            out.entries[i][j] = acc.filter(|a| a.excess() <= m as i64);
        }
    }
    Ok(out)
}

/// Matrix of `θφ` in the admissible bases of `F(d)^n` (columns) for `φ` running over `F(d)^m` (rows),
/// i.e. the realization block of `•θ : J(n) → J(m)`.
fn entry_block(theta: &SteenrodOp, n: u32, m: u32, d: u32) -> F2Matrix {
    let rows_b = if m >= d { admissible_basis(m - d, d) } else { Vec::new() };
    let cols_b = if n >= d { admissible_basis(n - d, d) } else { Vec::new() };
    let mut blk = F2Matrix::zeros(rows_b.len(), cols_b.len());
    if theta.is_zero() || rows_b.is_empty() || cols_b.is_empty() {
        return blk;
    }
    let index: HashMap<&Monomial, usize> = cols_b.iter().enumerate().map(|(k, b)| (b, k)).collect();
    for (r, phi) in rows_b.iter().enumerate() {
        let img = sq_compose(theta, &SteenrodOp::from(phi.clone()));
        for a in img.terms() {
            if a.excess() > d as i64 {
                continue;
            }
            let c = index[a];
            blk.flip(r, c);
        }
    }
    blk
}

/// The linear map `f` in internal degree `d`, of size `dim target^d × dim source^d`.
pub fn realize_in_degree(f: &BGMorphism, d: u32) -> F2Matrix {
    let ro = f.target.offsets(d);
    let co = f.source.offsets(d);
    let mut out = F2Matrix::zeros(*ro.last().unwrap(), *co.last().unwrap());
    for (i, j, e) in f.nonzero() {
        let blk = entry_block(e, f.source.summands[j], f.target.summands[i], d);
        for r in 0..blk.rows() {
            for c in blk.ones_in_row(r) {
                out.flip(ro[i] + r, co[j] + c);
            }
        }
    }
    out
}

/// A cochain complex `terms[0] → terms[1] → …`.
#[derive(Clone, PartialEq, Eq)]
pub struct BGComplex {
    terms: Vec<BGModule>,
    diffs: Vec<BGMorphism>,
}

impl BGComplex {
    /// Checks shapes and that consecutive composites vanish.
    pub fn new(diffs: Vec<BGMorphism>) -> Result<Self, BGError> {
        let c = Self::new_unchecked(diffs)?;
        if let Some(k) = c.first_nonzero_square() {
            return Err(BGError::NotComplex(k));
        }
        Ok(c)
    }

    /// Shape checks only.
    pub fn new_unchecked(diffs: Vec<BGMorphism>) -> Result<Self, BGError> {
        let mut terms = Vec::new();
        for (k, d) in diffs.iter().enumerate() {
            if k > 0 && diffs[k - 1].target != d.source {
                return Err(BGError::Shape(format!("differential {k} does not continue the complex")));
            }
            terms.push(d.source.clone());
        }
        if let Some(last) = diffs.last() {
            terms.push(last.target.clone());
        }
        Ok(BGComplex { terms, diffs })
    }

    pub fn single(m: BGModule) -> Self {
        BGComplex { terms: vec![m], diffs: Vec::new() }
    }

    pub fn from_parts(terms: Vec<BGModule>, diffs: Vec<BGMorphism>) -> Result<Self, BGError> {
        if terms.is_empty() || diffs.len() + 1 != terms.len() {
            return Err(BGError::Shape("need one more term than differentials".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source != terms[k] || d.target != terms[k + 1] {
                return Err(BGError::Shape(format!("differential {k} has wrong endpoints")));
            }
        }
        let c = BGComplex { terms, diffs };
        if let Some(k) = c.first_nonzero_square() {
            return Err(BGError::NotComplex(k));
        }
        Ok(c)
    }

    pub fn terms(&self) -> &[BGModule] {
        &self.terms
    }

    pub fn diffs(&self) -> &[BGMorphism] {
        &self.diffs
    }

    pub fn term(&self, k: usize) -> BGModule {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    /// Differential out of position `k`, zero past the end.
    pub fn diff(&self, k: usize) -> BGMorphism {
        self.diffs.get(k).cloned().unwrap_or_else(|| BGMorphism::zero(self.term(k), self.term(k + 1)))
    }

    /// Index of the last nonzero term plus one, ignoring trailing zeros.
    pub fn len(&self) -> usize {
        self.terms.iter().rposition(|t| !t.is_empty()).map_or(0, |k| k + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_index(&self) -> u32 {
        self.terms.iter().map(BGModule::max_index).max().unwrap_or(0)
    }

    /// Position of the first `d∘d ≠ 0`, computed symbolically.
    pub fn first_nonzero_square(&self) -> Option<usize> {
        (0..self.diffs.len().saturating_sub(1)).find(|&k| !compose(&self.diffs[k + 1], &self.diffs[k]).unwrap().is_zero())
    }

    /// Homology dimensions at every position in internal degree `d`.
    pub fn homology_dims(&self, d: u32) -> Vec<usize> {
        let mats: Vec<F2Matrix> = self.diffs.iter().map(|f| realize_in_degree(f, d)).collect();
        let ranks: Vec<usize> = mats.iter().map(rank).collect();
        (0..self.terms.len())
            .map(|k| {
                let dim = self.terms[k].dim(d);
                let out = ranks.get(k).copied().unwrap_or(0);
                let inn = if k > 0 { ranks[k - 1] } else { 0 };
                dim - out - inn
            })
            .collect()
    }

    /// Realized `d∘d` vanishes in every degree up to `cutoff`.
    pub fn square_zero_realized(&self, cutoff: u32) -> bool {
        (0..=cutoff).all(|d| {
            self.diffs
                .windows(2)
                .all(|w| realize_in_degree(&w[1], d).mul(&realize_in_degree(&w[0], d)).is_zero())
        })
    }

    /// `Σ (-1)^k dim term_k^d`.
    pub fn euler_characteristic(&self, d: u32) -> i64 {
        self.terms.iter().enumerate().map(|(k, t)| if k % 2 == 0 { t.dim(d) as i64 } else { -(t.dim(d) as i64) }).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Diff {
            source: String,
            target: String,
            entries: Vec<Vec<String>>,
        }
        let diffs: Vec<Diff> = self
            .diffs
            .iter()
            .map(|d| Diff {
                source: d.source.to_string(),
                target: d.target.to_string(),
                entries: d.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect(),
            })
            .collect();
        serde_json::json!({
            "terms": self.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "differentials": diffs,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, BGError> {
        let bad = || BGError::Shape("malformed complex JSON".into());
        let terms: Vec<BGModule> = v["terms"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|t| t.as_str().ok_or_else(bad).and_then(str::parse))
            .collect::<Result<_, _>>()?;
        let mut diffs = Vec::new();
        for (k, d) in v["differentials"].as_array().ok_or_else(bad)?.iter().enumerate() {
            let src = terms.get(k).ok_or_else(bad)?.clone();
            let tgt = terms.get(k + 1).ok_or_else(bad)?.clone();
            let entries = d["entries"]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(bad)?
                        .iter()
                        .map(|e| e.as_str().ok_or_else(bad).and_then(|s| Ok(s.parse::<SteenrodOp>()?)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            diffs.push(BGMorphism::new(src, tgt, entries)?);
        }
        Self::from_parts(terms, diffs)
    }
}

impl fmt::Display for BGComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" -> "))
    }
}

impl fmt::Debug for BGComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{self}")?;
        for d in &self.diffs {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mahowald {
    /// `ΣJ(n) ≅ J(n+1)` for even `n`.
    Iso { n: u32 },
    /// `ΣJ(2k+1) → J(2k+2) → J(k+1)`.
    Resolution(BGComplex),
}

pub fn mahowald(n: u32) -> Mahowald {
    if n.is_multiple_of(2) {
        Mahowald::Iso { n }
    } else {
        let k = n / 2;
        let f = BGMorphism::single(n + 1, k + 1, SteenrodOp::sq(k + 1)).expect("degree is n+1-(k+1)");
        Mahowald::Resolution(BGComplex::new(vec![f]).expect("single map"))
    }
}

/// `•Sq^{(n+1)/2} : J(n+1) → J((n+1)/2)` for odd `n`, the map `p` of a suspension.
pub fn mahowald_map(n: u32) -> BGMorphism {
    assert!(n % 2 == 1, "mahowald_map wants odd n");
    let h = n.div_ceil(2);
    BGMorphism::single(n + 1, h, SteenrodOp::sq(h)).expect("degree matches")
}
