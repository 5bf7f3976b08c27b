//! The Lambda algebra.
//!
//! Generators `λ_i` have bidegree `(1, i+1)`. A monomial `λ_{a_1}…λ_{a_r}` is
//! admissible when `a_i <= 2 a_{i+1}`; an admissible monomial is the path
//! `(a_1+1, …, a_r+1)` from the root of `G(m, 1)`. Inadmissible pairs are
//! rewritten with the transpose of the Adem matrix. `λ_{-1}` is allowed in
//! monomials only for the commutator form of the differential.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::f2_linalg::{rank, F2Matrix};
use crate::psr::{build_graph, build_graph_truncated, BGGraph, PsrError};
use crate::steenrod::{lucas_binom_mod2, reduce_monomial, Monomial};
use crate::Report;

/// Pair rewrites allowed per call of [`lambda_rewrite`].
pub const DEFAULT_FUEL: u64 = 1 << 24;
const MAX_DEPTH: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LambdaError {
    #[error("cannot parse Lambda monomial {0:?}")]
    Parse(String),
    #[error("index {0} is below -1")]
    Index(i32),
    #[error("rewriting did not terminate within the fuel bound")]
    Fuel,
    #[error("{0} is not an admissible monomial of Λ")]
    NotAdmissible(String),
    #[error("weight {got} exceeds the graph bound {max}")]
    OutOfRange { got: u32, max: u32 },
    #[error("graph construction failed: {0}")]
    Graph(String),
}

impl From<PsrError> for LambdaError {
    fn from(e: PsrError) -> Self {
        LambdaError::Graph(e.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LambdaMonomial(Vec<i32>);

impl LambdaMonomial {
    pub fn new(indices: Vec<i32>) -> Result<Self, LambdaError> {
        if let Some(&bad) = indices.iter().find(|&&a| a < -1) {
            return Err(LambdaError::Index(bad));
        }
        Ok(LambdaMonomial(indices))
    }

    pub fn one() -> Self {
        LambdaMonomial(Vec::new())
    }

    pub fn gen(i: i32) -> Self {
        assert!(i >= -1, "λ_{i} does not exist");
        LambdaMonomial(vec![i])
    }

    pub fn indices(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ (a_i + 1)`
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&a| (a + 1) as u32).sum()
    }

    pub fn bidegree(&self) -> (usize, u32) {
        (self.len(), self.weight())
    }

    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= 2 * w[1])
    }

    /// Has no `λ_{-1}` factor.
    pub fn in_lambda(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn concat(&self, other: &LambdaMonomial) -> LambdaMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        LambdaMonomial(v)
    }

    /// Vertex sequence of the matching path in `G(m, n)`.
    pub fn path(&self) -> Vec<u32> {
        self.0.iter().map(|&a| (a + 1) as u32).collect()
    }

    pub fn from_path(seq: &[u32]) -> Self {
        LambdaMonomial(seq.iter().map(|&k| k as i32 - 1).collect())
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for a in &self.0 {
            write!(f, "l({a})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LambdaMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for LambdaMonomial {
    type Err = LambdaError;

    /// `"l(2)l(0)"`, or `"1"` for the unit.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LambdaError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "1" {
            return Ok(Self::one());
        }
        if t.is_empty() {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body = rest.strip_prefix("l(").ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            out.push(body[..close].parse::<i32>().map_err(|_| bad())?);
            rest = &body[close + 1..];
        }
        LambdaMonomial::new(out)
    }
}

/// An F2-combination of Lambda monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaElement {
    terms: BTreeSet<LambdaMonomial>,
}

impl LambdaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        LambdaMonomial::one().into()
    }

    pub fn gen(i: i32) -> Self {
        LambdaMonomial::gen(i).into()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &LambdaMonomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, m: &LambdaMonomial) -> bool {
        self.terms.contains(m)
    }

    pub fn add_monomial(&mut self, m: LambdaMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &LambdaElement) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    pub fn add(&self, other: &LambdaElement) -> LambdaElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Concatenation product, not rewritten.
    pub fn mul(&self, other: &LambdaElement) -> LambdaElement {
        let mut out = LambdaElement::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_monomial(a.concat(b));
            }
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.terms.iter().all(LambdaMonomial::is_admissible)
    }

    pub fn bidegree(&self) -> Option<(usize, u32)> {
        let mut it = self.terms.iter().map(LambdaMonomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }
}

impl From<LambdaMonomial> for LambdaElement {
    fn from(m: LambdaMonomial) -> Self {
        LambdaElement { terms: BTreeSet::from([m]) }
    }
}

impl FromIterator<LambdaMonomial> for LambdaElement {
    fn from_iter<I: IntoIterator<Item = LambdaMonomial>>(iter: I) -> Self {
        let mut out = LambdaElement::zero();
        for m in iter {
            out.add_monomial(m);
        }
        out
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LambdaElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for LambdaElement {
    type Err = LambdaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "0" {
            return Ok(Self::zero());
        }
        s.split('+').map(|p| p.parse::<LambdaMonomial>()).collect()
    }
}

thread_local! {
    static PAIRS: RefCell<HashMap<(i32, i32), Vec<(i32, i32)>>> = RefCell::new(HashMap::new());
    static TIMES: RefCell<HashMap<(LambdaMonomial, i32), LambdaElement>> = RefCell::new(HashMap::new());
}

/// Admissible `(i, j)` with `λ_a λ_b = Σ λ_i λ_j`, for `a >= 2b + 1`.
///
/// `λ_i λ_j` appears iff `Sq^{a+1} Sq^{b+1}` appears in the admissible form of
/// `Sq^{i+1} Sq^{j+1}`. `Sq^0` factors are units on the Steenrod side.
pub fn pair_rewrite(a: i32, b: i32) -> Vec<(i32, i32)> {
    assert!(b >= -1 && a > 2 * b, "λ_{a}λ_{b} is admissible");
    if let Some(hit) = PAIRS.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return hit;
    }
    let target = Monomial::new([(a + 1) as u32, (b + 1) as u32]);
    let total = a + b;
    let mut out = Vec::new();
    let mut i = -1;
    while 3 * i <= 2 * total {
        let j = total - i;
        if j >= -1 && reduce_monomial(&Monomial::new([(i + 1) as u32, (j + 1) as u32])).contains(&target) {
            out.push((i, j));
        }
        i += 1;
    }
    PAIRS.with(|c| c.borrow_mut().insert((a, b), out.clone()));
    out
}

struct Fuel {
    left: u64,
}

impl Fuel {
    fn burn(&mut self) -> Result<(), LambdaError> {
        self.left = self.left.checked_sub(1).ok_or(LambdaError::Fuel)?;
        Ok(())
    }
}

/// `x λ_b` in admissible form, `x` admissible.
fn times_gen(x: &LambdaMonomial, b: i32, fuel: &mut Fuel, depth: usize) -> Result<LambdaElement, LambdaError> {
    match x.0.last() {
        None => return Ok(LambdaElement::gen(b)),
        Some(&a) if a <= 2 * b => return Ok(x.concat(&LambdaMonomial(vec![b])).into()),
        _ => {}
    }
    if depth > MAX_DEPTH {
        return Err(LambdaError::Fuel);
    }
    let key = (x.clone(), b);
    if let Some(hit) = TIMES.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(hit);
    }
    let a = *x.0.last().unwrap();
    let head = LambdaMonomial(x.0[..x.len() - 1].to_vec());
    let mut out = LambdaElement::zero();
    for (i, j) in pair_rewrite(a, b) {
        fuel.burn()?;
        for y in times_gen(&head, i, fuel, depth + 1)?.terms() {
            out.add_assign(&times_gen(y, j, fuel, depth + 1)?);
        }
    }
    TIMES.with(|c| c.borrow_mut().insert(key, out.clone()));
    Ok(out)
}

/// Admissible normal form.
pub fn lambda_rewrite(word: &LambdaElement) -> Result<LambdaElement, LambdaError> {
    lambda_rewrite_with_fuel(word, DEFAULT_FUEL)
}

pub fn lambda_rewrite_with_fuel(word: &LambdaElement, fuel: u64) -> Result<LambdaElement, LambdaError> {
    let mut fuel = Fuel { left: fuel };
    let mut out = LambdaElement::zero();
    for m in word.terms() {
        let mut acc = LambdaElement::one();
        for &b in m.indices() {
            let mut next = LambdaElement::zero();
            for y in acc.terms() {
                next.add_assign(&times_gen(y, b, &mut fuel, 0)?);
            }
            acc = next;
        }
        out.add_assign(&acc);
    }
    Ok(out)
}

/// `rewrite(x y)`.
pub fn lambda_product(x: &LambdaElement, y: &LambdaElement) -> Result<LambdaElement, LambdaError> {
    lambda_rewrite(&x.mul(y))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub a: i32,
    pub b: i32,
    pub oracle: Vec<LambdaMonomial>,
    pub formula: Vec<LambdaMonomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checked: usize,
    pub matched: usize,
    pub mismatches: Vec<AuditEntry>,
}

/// Terms of the closed formula `Σ_{2a+2b > 3i+1 >= 6b+4} C(a-2i-1, i-2b-1) λ_i λ_{a+b-i}`,
/// binomials as in [`lucas_binom_mod2`].
pub fn closed_formula_terms(a: i32, b: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    let mut i = 2 * b + 1;
    while 3 * i + 1 < 2 * a + 2 * b {
        if 3 * i + 1 >= 6 * b + 4 && lucas_binom_mod2((a - 2 * i - 1) as i64, (i - 2 * b - 1) as i64) {
            out.push((i, a + b - i));
        }
        i += 1;
    }
    out
}

/// Compare the closed formula with [`pair_rewrite`] for `0 <= b`, `2b+1 <= a <= a_max`.
pub fn closed_formula_audit(a_max: i32) -> AuditReport {
    let pairs = |v: Vec<(i32, i32)>| -> Vec<LambdaMonomial> { v.into_iter().map(|(i, j)| LambdaMonomial(vec![i, j])).collect() };
    let mut rep = AuditReport { checked: 0, matched: 0, mismatches: Vec::new() };
    for a in 1..=a_max {
        for b in 0..=(a - 1) / 2 {
            rep.checked += 1;
            let mut oracle = pairs(pair_rewrite(a, b));
            let mut formula = pairs(closed_formula_terms(a, b));
            oracle.sort();
            formula.sort();
            if oracle == formula {
                rep.matched += 1;
            } else {
                rep.mismatches.push(AuditEntry { a, b, oracle, formula });
            }
        }
    }
    rep
}

/// Admissible monomials of bidegree `(r, s)` in `Λ`, lexicographic.
pub fn lambda_basis(r: usize, s: u32) -> Vec<LambdaMonomial> {
    fn go(prev: Option<i32>, len: usize, s: i32, buf: &mut Vec<i32>, out: &mut Vec<LambdaMonomial>) {
        if len == 0 {
            if s == 0 {
                out.push(LambdaMonomial(buf.clone()));
            }
            return;
        }
        let lo = prev.map_or(0, |p| (p + 1) / 2);
        // the remaining `len - 1` factors need weight at least 1 each
        let hi = s - len as i32;
        for a in lo..=hi {
            buf.push(a);
            go(Some(a), len - 1, s - a - 1, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if s == 0 {
            out.push(LambdaMonomial::one());
        }
        return out;
    }
    go(None, r, s as i32, &mut Vec::new(), &mut out);
    out
}

/// Whether `x` is the path of a vertex of `G(m, n)`.
pub fn is_unstable_admissible(x: &LambdaMonomial, m: u32, n: u32) -> bool {
    if !x.in_lambda() || !x.is_admissible() {
        return false;
    }
    let mut used = 0;
    for (i, k) in x.path().into_iter().enumerate() {
        if (i == 0 && 2 * k <= n) || 2 * k > m + n - used {
            return false;
        }
        used += k;
    }
    true
}

/// The stable graph window used for the differential:
/// `G(2 s_max, 1)` truncated at Lambda weight `s_max`.
pub struct StableGraph {
    s_max: u32,
    graph: BGGraph,
    by_seq: HashMap<Vec<u32>, usize>,
}

impl StableGraph {
    pub fn new(s_max: u32) -> Result<Self, LambdaError> {
        let graph = build_graph_truncated((2 * s_max).max(1), 1, s_max)?;
        let by_seq = graph.vertices().iter().map(|v| (v.seq.clone(), v.id)).collect();
        Ok(StableGraph { s_max, graph, by_seq })
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn graph(&self) -> &BGGraph {
        &self.graph
    }

    /// `d(x) = Σ_{[x,v] = Sq^0} v`, extended linearly.
    pub fn differential(&self, x: &LambdaElement) -> Result<LambdaElement, LambdaError> {
        let mut out = LambdaElement::zero();
        for m in x.terms() {
            if !m.in_lambda() || !m.is_admissible() {
                return Err(LambdaError::NotAdmissible(m.to_string()));
            }
            if m.weight() > self.s_max {
                return Err(LambdaError::OutOfRange { got: m.weight(), max: self.s_max });
            }
            let v = self.by_seq[&m.path()];
            for (&w, &k) in self.graph.out_edges(v) {
                if k == 0 {
                    out.add_monomial(LambdaMonomial::from_path(&self.graph.vertices()[w].seq));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `d: Λ^{r,s} → Λ^{r+1,s}`; columns follow `lambda_basis(r, s)`.
    pub fn diff_matrix(&self, r: usize, s: u32) -> Result<F2Matrix, LambdaError> {
        let src = lambda_basis(r, s);
        let tgt = lambda_basis(r + 1, s);
        let pos: HashMap<&LambdaMonomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = F2Matrix::zeros(tgt.len(), src.len());
        for (j, x) in src.iter().enumerate() {
            for y in self.differential(&x.clone().into())?.terms() {
                mat.set(pos[y], j, true);
            }
        }
        Ok(mat)
    }

    /// `dim H^{r,s}` for `r <= r_max`, `s <= min(s_max, self.s_max)`.
    pub fn homology(&self, r_max: usize, s_max: u32) -> Result<HomologyTable, LambdaError> {
        let s_max = s_max.min(self.s_max);
        let per_s: Vec<Result<Vec<usize>, LambdaError>> = std::thread::scope(|sc| {
            let handles: Vec<_> = (0..=s_max)
                .map(|s| {
                    sc.spawn(move || -> Result<Vec<usize>, LambdaError> {
                        // ranks[r] = rank of d from position r
                        let top = r_max.min(s as usize);
                        let mut ranks = Vec::new();
                        for r in 0..=top {
                            ranks.push(rank(&self.diff_matrix(r, s)?));
                        }
                        Ok((0..=r_max)
                            .map(|r| {
                                let dim = lambda_basis(r, s).len();
                                let out = ranks.get(r).copied().unwrap_or(0);
                                let inc = if r == 0 { 0 } else { ranks.get(r - 1).copied().unwrap_or(0) };
                                dim - out - inc
                            })
                            .collect())
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("homology worker panicked")).collect()
        });
        let mut table = HomologyTable::default();
        for (s, row) in per_s.into_iter().enumerate() {
            for (r, dim) in row?.into_iter().enumerate() {
                table.dims.insert((r, s as u32), dim);
            }
        }
        Ok(table)
    }
}

/// `d` read off a fresh stable graph sized for `x`.
pub fn differential(x: &LambdaElement) -> Result<LambdaElement, LambdaError> {
    let s = x.terms().map(LambdaMonomial::weight).max().unwrap_or(0);
    StableGraph::new(s)?.differential(x)
}

/// `rewrite(x λ_{-1}) + rewrite(λ_{-1} x)`, the commutator form of `d`.
pub fn commutator_differential(x: &LambdaElement) -> Result<LambdaElement, LambdaError> {
    let l = LambdaElement::gen(-1);
    Ok(lambda_rewrite(&x.mul(&l))?.add(&lambda_rewrite(&l.mul(x))?))
}

pub fn lambda_homology(r_max: usize, s_max: u32) -> Result<HomologyTable, LambdaError> {
    StableGraph::new(s_max)?.homology(r_max, s_max)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub dims: BTreeMap<(usize, u32), usize>,
}

impl HomologyTable {
    pub fn get(&self, r: usize, s: u32) -> usize {
        self.dims.get(&(r, s)).copied().unwrap_or(0)
    }

    /// `(r, s, dim)` with `dim > 0`, sorted.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, u32, usize)> + '_ {
        self.dims.iter().filter(|(_, &d)| d > 0).map(|(&(r, s), &d)| (r, s, d))
    }
}

impl Serialize for HomologyTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell {
            r: usize,
            s: u32,
            dim: usize,
        }
        s.collect_seq(self.dims.iter().map(|(&(r, s), &dim)| Cell { r, s, dim }))
    }
}

fn all_monomials(s_max: u32) -> Vec<LambdaMonomial> {
    (0..=s_max).flat_map(|s| (0..=s as usize).flat_map(move |r| lambda_basis(r, s))).collect()
}

/// `d∘d = 0` on every basis element of weight at most `s_max`.
pub fn check_d_squared(g: &StableGraph, s_max: u32) -> Result<Report, LambdaError> {
    let mut rep = Report::new();
    for x in all_monomials(s_max.min(g.s_max())) {
        let dd = g.differential(&g.differential(&x.clone().into())?)?;
        rep.record(dd.is_zero(), || format!("d(d({x})) = {dd}"));
    }
    Ok(rep)
}

/// Graph differential against the commutator with `λ_{-1}`.
pub fn check_commutator(g: &StableGraph, s_max: u32) -> Result<Report, LambdaError> {
    let mut rep = Report::new();
    for x in all_monomials(s_max.min(g.s_max())) {
        let e: LambdaElement = x.clone().into();
        let a = g.differential(&e)?;
        let b = commutator_differential(&e)?;
        rep.record(a == b, || format!("{x}: graph d = {a}, commutator = {b}"));
    }
    Ok(rep)
}

/// `d(xy) = d(x) y + x d(y)` for admissible `x, y` of total weight at most `s_max`.
pub fn check_derivation(g: &StableGraph, s_max: u32) -> Result<Report, LambdaError> {
    let mut rep = Report::new();
    let s_max = s_max.min(g.s_max());
    let mons = all_monomials(s_max);
    for x in &mons {
        for y in &mons {
            if x.is_empty() || y.is_empty() || x.weight() + y.weight() > s_max {
                continue;
            }
            let (x, y): (LambdaElement, LambdaElement) = (x.clone().into(), y.clone().into());
            let lhs = g.differential(&lambda_product(&x, &y)?)?;
            let rhs = lambda_product(&g.differential(&x)?, &y)?.add(&lambda_product(&x, &g.differential(&y)?)?);
            rep.record(lhs == rhs, || format!("d({x}·{y}) = {lhs}, Leibniz gives {rhs}"));
        }
    }
    Ok(rep)
}

/// `rewrite(rewrite(xy) z) = rewrite(x rewrite(yz))` for admissible monomials of
/// total weight at most `s_max`.
pub fn check_associativity(s_max: u32) -> Result<Report, LambdaError> {
    let mut rep = Report::new();
    let mons: Vec<LambdaMonomial> = all_monomials(s_max).into_iter().filter(|m| !m.is_empty()).collect();
    for x in &mons {
        for y in &mons {
            if x.weight() + y.weight() >= s_max {
                continue;
            }
            let xy = lambda_rewrite(&x.concat(y).into())?;
            for z in &mons {
                if x.weight() + y.weight() + z.weight() > s_max {
                    continue;
                }
                let zl: LambdaElement = z.clone().into();
                let left = lambda_product(&xy, &zl)?;
                let yz = lambda_rewrite(&y.concat(z).into())?;
                let right = lambda_product(&x.clone().into(), &yz)?;
                rep.record(left == right, || format!("({x}·{y})·{z} = {left} but {x}·({y}·{z}) = {right}"));
            }
        }
    }
    Ok(rep)
}

/// The generator of `Λ(m, n)` at a vertex of `G(m, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerGenerator {
    pub vertex: usize,
    pub monomial: LambdaMonomial,
    pub r: usize,
    pub s: u32,
}

/// `Λ(m, n)` with the right action of `λ_i` and the boundary `∂^{m,n}`.
pub struct UnstableTower {
    m: u32,
    n: u32,
    graph: BGGraph,
}

impl UnstableTower {
    pub fn new(m: u32, n: u32) -> Result<Self, LambdaError> {
        Ok(UnstableTower { m, n, graph: build_graph(m, n)? })
    }

    pub fn graph(&self) -> &BGGraph {
        &self.graph
    }

    /// Generators at positions up to `r_max`, in vertex order.
    pub fn generators(&self, r_max: usize) -> Vec<TowerGenerator> {
        self.graph
            .vertices()
            .iter()
            .filter(|v| v.position <= r_max)
            .map(|v| TowerGenerator {
                vertex: v.id,
                monomial: LambdaMonomial::from_path(&v.seq),
                r: v.position,
                s: self.m + self.n - v.lambda_weight,
            })
            .collect()
    }

    /// `x λ_i = Σ_{[x,y] = Sq^{i+1}} y` on a set of vertices.
    pub fn act(&self, xs: &BTreeSet<usize>, i: i32) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &x in xs {
            for (&y, &k) in self.graph.out_edges(x) {
                if k as i32 == i + 1 && !out.remove(&y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// `xs · θ` for a word `θ`, applied factor by factor.
    pub fn act_word(&self, xs: &BTreeSet<usize>, theta: &LambdaMonomial) -> BTreeSet<usize> {
        theta.indices().iter().fold(xs.clone(), |acc, &i| self.act(&acc, i))
    }

    pub fn act_element(&self, xs: &BTreeSet<usize>, theta: &LambdaElement) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for t in theta.terms() {
            for y in self.act_word(xs, t) {
                if !out.remove(&y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// `∂^{m,n}`: sum over the `Sq^0` edges.
    pub fn boundary(&self, xs: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.act(xs, -1)
    }

    fn root(&self) -> BTreeSet<usize> {
        BTreeSet::from([0])
    }

    /// `x λ_i = 0` whenever `2i + 2 > s(x)`.
    pub fn check_action_vanishing(&self) -> Report {
        let mut rep = Report::new();
        let top = (self.m + self.n) as i32;
        for g in self.generators(usize::MAX) {
            for i in 0..top {
                if 2 * i + 2 > g.s as i32 {
                    let y = self.act(&BTreeSet::from([g.vertex]), i);
                    rep.record(y.is_empty(), || format!("vertex {} ({}) λ_{i} = {y:?}", g.vertex, g.monomial));
                }
            }
        }
        rep
    }

    /// The action respects the Lambda relations, and `∂(p θ) = p d(θ)` for
    /// `θ` of weight at most `s_max` whose path is a vertex of `G(m, n)`.
    ///
    /// Off the vertex set `p θ = 0` while `p d(θ)` need not vanish
    /// (`λ_4` in `Λ(5, 3)`), so those `θ` are skipped.
    pub fn check_compatibility(&self, s_max: u32) -> Result<Report, LambdaError> {
        let g = StableGraph::new(s_max)?;
        let mut rep = Report::new();
        let p = self.root();
        for x in all_monomials(s_max).into_iter().filter(|x| is_unstable_admissible(x, self.m, self.n)) {
            let pt = self.act_word(&p, &x);
            let lhs = self.boundary(&pt);
            let rhs = self.act_element(&p, &g.differential(&x.clone().into())?);
            rep.record(lhs == rhs, || format!("∂(p·{x}) = {lhs:?}, p·d({x}) = {rhs:?}"));
        }
        for a in 0..s_max as i32 {
            for b in 0..=(a - 1) / 2 {
                if a + b + 2 > s_max as i32 || a < 2 * b + 1 {
                    continue;
                }
                let word = LambdaMonomial(vec![a, b]);
                let lhs = self.act_word(&p, &word);
                let rhs = self.act_element(&p, &lambda_rewrite(&word.clone().into())?);
                rep.record(lhs == rhs, || format!("p·{word} = {lhs:?} but p·rewrite = {rhs:?}"));
            }
        }
        Ok(rep)
    }
}
