//! Pseudo-hyperresolutions of BG complexes, the suspension engine, the graph
//! model `G(m,n)`, minimal reduction and the `R(I)` Ext complex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::brown_gitler::{compose, truncate, BGComplex, BGError, BGModule, BGMorphism};
use crate::f2_linalg::{rank, solve_lex_min, F2Matrix};
use crate::steenrod::{admissible_basis, Monomial, SteenrodOp};

#[derive(Debug, Error)]
pub enum PsrError {
    #[error(transparent)]
    BG(#[from] BGError),
    #[error("no connecting maps make position {position} a complex")]
    NoSolution { position: usize },
    #[error("lift {k} does not map term 0 of base {k} to term 0 of base {}", k + 1)]
    LiftShape { k: usize },
    #[error("edge closure stuck at {from} -> {to}: no admissible-path edge labelled Sq^{label}")]
    ClosureStuck { from: usize, to: usize, label: u32 },
    #[error("edge closure did not converge after {0} rounds")]
    ClosureDiverged(usize),
}

/// Sort concatenated summands, returning the module and `raw index -> sorted index`.
fn sorted_with_perm(raw: &[u32]) -> (BGModule, Vec<usize>) {
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].cmp(&raw[a]));
    let mut perm = vec![0; raw.len()];
    for (pos, &r) in order.iter().enumerate() {
        perm[r] = pos;
    }
    (BGModule::new(raw.to_vec()), perm)
}

/// Layout of one total term `⊕_{k+t=n} base[k]^t`, blocks ordered by `t` ascending.
struct TotalTerm {
    module: BGModule,
    /// (k, t, raw offset)
    blocks: Vec<(usize, usize, usize)>,
    perm: Vec<usize>,
}

impl TotalTerm {
    fn new(base: &[BGComplex], n: usize) -> Self {
        let mut raw = Vec::new();
        let mut blocks = Vec::new();
        for t in 0..=n {
            let k = n - t;
            if k >= base.len() {
                continue;
            }
            blocks.push((k, t, raw.len()));
            raw.extend_from_slice(base[k].term(t).summands());
        }
        let (module, perm) = sorted_with_perm(&raw);
        TotalTerm { module, blocks, perm }
    }

    fn block(&self, k: usize, t: usize) -> Option<usize> {
        self.blocks.iter().find(|b| b.0 == k && b.1 == t).map(|b| b.2)
    }
}

fn place(dst: &mut BGMorphism, f: &BGMorphism, src_at: (&TotalTerm, usize), tgt_at: (&TotalTerm, usize)) -> Result<(), BGError> {
    for (i, j, e) in f.nonzero() {
        let r = tgt_at.0.perm[tgt_at.1 + i];
        let c = src_at.0.perm[src_at.1 + j];
        dst.set(r, c, e.clone())?;
    }
    Ok(())
}

/// Assemble a resolution from resolutions `base[k]` of the terms of an acyclic
/// complex, given lifts `lifts[k] : base[k]^0 → base[k+1]^0` of its differentials.
///
/// The remaining lower-triangular blocks `base[k]^t → base[k+i+1]^{t-i}` are solved
/// position by position so that consecutive differentials compose to zero.
pub fn assemble_psr(base: &[BGComplex], lifts: &[BGMorphism]) -> Result<BGComplex, PsrError> {
    assemble_psr_with_layout(base, lifts).map(|(c, _)| c)
}

/// Where a summand of an assembled term came from: summand `local` of `base[k]^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub k: usize,
    pub t: usize,
    pub local: usize,
}

/// [`assemble_psr`], also returning `layout[n][i]`, the origin of summand `i` of term `n`.
pub fn assemble_psr_with_layout(base: &[BGComplex], lifts: &[BGMorphism]) -> Result<(BGComplex, Vec<Vec<Origin>>), PsrError> {
    if base.is_empty() {
        return Ok((BGComplex::single(BGModule::zero()), vec![Vec::new()]));
    }
    for (k, f) in lifts.iter().enumerate() {
        if k + 1 >= base.len() || *f.source() != base[k].term(0) || *f.target() != base[k + 1].term(0) {
            return Err(PsrError::LiftShape { k });
        }
    }
    let top = (0..base.len()).map(|k| k + base[k].terms().len().max(1) - 1).max().unwrap_or(0);
    let terms: Vec<TotalTerm> = (0..=top + 1).map(|n| TotalTerm::new(base, n)).collect();
    let mut diffs: Vec<BGMorphism> = Vec::new();
    for n in 0..top {
        let (src, tgt) = (&terms[n], &terms[n + 1]);
        let mut known = BGMorphism::zero(src.module.clone(), tgt.module.clone());
        // unknown blocks as (source raw offset, source len, target raw offset, target len)
        let mut unknown = Vec::new();
        for &(k, t, off) in &src.blocks {
            let here = base[k].term(t);
            if let Some(toff) = tgt.block(k, t + 1) {
                place(&mut known, &base[k].diff(t), (src, off), (tgt, toff))?;
            }
            if t == 0 {
                if let (Some(f), Some(toff)) = (lifts.get(k), tgt.block(k + 1, 0)) {
                    place(&mut known, f, (src, off), (tgt, toff))?;
                }
                continue;
            }
            for i in 0..=t {
                if let Some(toff) = tgt.block(k + i + 1, t - i) {
                    let there = base[k + i + 1].term(t - i);
                    unknown.push((off, here.len(), toff, there.len()));
                }
            }
        }
        let d = if n == 0 || unknown.is_empty() {
            known
        } else {
            solve_blocks(&diffs[n - 1], known, src, tgt, &unknown).ok_or(PsrError::NoSolution { position: n })?
        };
        diffs.push(d);
    }
    let layout = terms[..=top]
        .iter()
        .map(|tt| {
            let mut o = vec![Origin { k: 0, t: 0, local: 0 }; tt.perm.len()];
            for &(k, t, off) in &tt.blocks {
                for local in 0..base[k].term(t).len() {
                    o[tt.perm[off + local]] = Origin { k, t, local };
                }
            }
            o
        })
        .collect();
    let c = if diffs.is_empty() { BGComplex::single(terms[0].module.clone()) } else { BGComplex::new(diffs)? };
    Ok((c, layout))
}

/// Solve for the unknown entries of `next` so that `next ∘ prev = 0`.
fn solve_blocks(
    prev: &BGMorphism,
    known: BGMorphism,
    src: &TotalTerm,
    tgt: &TotalTerm,
    unknown: &[(usize, usize, usize, usize)],
) -> Option<BGMorphism> {
    let s_idx = src.module.summands();
    let t_idx = tgt.module.summands();
    // variables: (row r, column u, basis element)
    let mut vars: Vec<(usize, usize, Monomial)> = Vec::new();
    for &(so, sl, to, tl) in unknown {
        for ti in 0..tl {
            let r = tgt.perm[to + ti];
            for si in 0..sl {
                let u = src.perm[so + si];
                let (a, b) = (s_idx[u], t_idx[r]);
                if a < b {
                    continue;
                }
                for beta in admissible_basis(a - b, b) {
                    vars.push((r, u, beta));
                }
            }
        }
    }
    if vars.is_empty() {
        return if compose(&known, prev).ok()?.is_zero() { Some(known) } else { None };
    }
    let mut rows: HashMap<(usize, usize, Monomial), usize> = HashMap::new();
    let mut row_of = |key: (usize, usize, Monomial)| {
        let n = rows.len();
        *rows.entry(key).or_insert(n)
    };
    // contribution of `op` placed at (r, u) to the composite, as coordinates
    let contrib = |r: usize, u: usize, op: &SteenrodOp| -> Vec<(usize, Monomial)> {
        let mut out = Vec::new();
        for c in 0..prev.source().len() {
            let f = prev.entry(u, c);
            if f.is_zero() {
                continue;
            }
            let w = truncate(&f.mul(op), t_idx[r]);
            out.extend(w.terms().map(|m| (c, m.clone())));
        }
        out
    };
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(vars.len());
    for (r, u, beta) in &vars {
        let col = contrib(*r, *u, &SteenrodOp::from(beta.clone())).into_iter().map(|(c, m)| row_of((*r, c, m))).collect();
        cols.push(col);
    }
    let mut rhs_rows = Vec::new();
    for (r, u, e) in known.nonzero() {
        for (c, m) in contrib(r, u, e) {
            rhs_rows.push(row_of((r, c, m)));
        }
    }
    let mut a = F2Matrix::zeros(rows.len(), vars.len());
    for (j, col) in cols.iter().enumerate() {
        for &i in col {
            a.flip(i, j);
        }
    }
    let mut b = F2Matrix::zeros(rows.len(), 1);
    for i in rhs_rows {
        b.flip(i, 0);
    }
    let x = solve_lex_min(&a, &b)?;
    let mut entries: BTreeMap<(usize, usize), SteenrodOp> = BTreeMap::new();
    for (j, (r, u, beta)) in vars.iter().enumerate() {
        if x.get(j, 0) {
            entries.entry((*r, *u)).or_default().add_monomial(beta.clone());
        }
    }
    let mut out = known;
    for ((r, u), op) in entries {
        let cur = out.entry(r, u).clone();
        let mut sum = cur;
        sum.add_assign(&op);
        out.set(r, u, sum).ok()?;
    }
    Some(out)
}

/// `ℓ(⊕ J(n)) = ⊕ J(n+1)`.
pub fn ell(b: &BGModule) -> BGModule {
    BGModule::new(b.summands().iter().map(|n| n + 1).collect())
}

/// `Φ̃(⊕ J(n)) = ⊕_{n even} J(n/2)`.
pub fn phi_tilde(b: &BGModule) -> BGModule {
    BGModule::new(b.summands().iter().filter(|n| *n % 2 == 0 && **n > 0).map(|n| n / 2).collect())
}

/// The projection `p : ℓB → Φ̃ℓB`, diagonal `•Sq^{(n+1)/2}` on odd summands.
pub fn mahowald_projection(b: &BGModule) -> BGMorphism {
    let src = ell(b);
    let tgt = phi_tilde(&src);
    let mut p = BGMorphism::zero(src.clone(), tgt);
    let mut i = 0;
    for (j, &n) in src.summands().iter().enumerate() {
        if n % 2 == 0 && n > 0 {
            p.set(i, j, SteenrodOp::sq(n / 2)).expect("degree n/2");
            i += 1;
        }
    }
    p
}

/// `Ψ(b)`: a resolution of the suspension of the lone cohomology of `b`.
pub fn suspend_complex(b: &BGComplex) -> Result<BGComplex, PsrError> {
    suspend_complex_with_layout(b).map(|(c, _)| c)
}

/// [`suspend_complex`] with the summand origins of [`assemble_psr_with_layout`]:
/// `t = 0` is `ℓ b^k`, `t = 1` is `Φ̃ℓ b^k`.
pub fn suspend_complex_with_layout(b: &BGComplex) -> Result<(BGComplex, Vec<Vec<Origin>>), PsrError> {
    let base: Vec<BGComplex> = b
        .terms()
        .iter()
        .map(|t| {
            let p = mahowald_projection(t);
            if p.target().is_empty() {
                BGComplex::single(p.source().clone())
            } else {
                BGComplex::new(vec![p]).expect("one map")
            }
        })
        .collect();
    let mut lifts = Vec::new();
    for f in b.diffs() {
        let mut th = BGMorphism::zero(ell(f.source()), ell(f.target()));
        for (i, j, e) in f.nonzero() {
            th.set(i, j, e.clone())?;
        }
        lifts.push(th);
    }
    assemble_psr_with_layout(&base, &lifts)
}

/// `Ψ^m([J(n)])`, reducing to the minimal complex after each step when `reduce` is set.
pub fn iterated_suspension(m: u32, n: u32, reduce: bool) -> Result<BGComplex, PsrError> {
    let mut c = BGComplex::single(BGModule::j(n));
    for _ in 0..m {
        c = suspend_complex(&c)?;
        if reduce {
            c = minimal_reduce(&c);
        }
    }
    Ok(c)
}

/// Cancel identity entries until none remain.
///
/// Positions are cleared left to right; cancelling at position `k` only deletes
/// rows and columns elsewhere, so earlier positions stay identity-free.
pub fn minimal_reduce(c: &BGComplex) -> BGComplex {
    let mut terms: Vec<Vec<Option<u32>>> = c.terms().iter().map(|t| t.summands().iter().map(|&s| Some(s)).collect()).collect();
    // rows[k][i]: source column → entry; cols[k][j]: rows with a nonzero entry in column j
    let mut rows: Vec<Vec<BTreeMap<usize, SteenrodOp>>> = Vec::new();
    let mut cols: Vec<Vec<BTreeSet<usize>>> = Vec::new();
    for d in c.diffs() {
        let mut r = vec![BTreeMap::new(); d.target().len()];
        let mut cs = vec![BTreeSet::new(); d.source().len()];
        for (i, j, e) in d.nonzero() {
            r[i].insert(j, e.clone());
            cs[j].insert(i);
        }
        rows.push(r);
        cols.push(cs);
    }
    let one = SteenrodOp::one();
    for k in 0..rows.len() {
        let mut ids: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, r) in rows[k].iter().enumerate() {
            for (&j, e) in r {
                if *e == one {
                    ids.insert((i, j));
                }
            }
        }
        while let Some((i, j)) = ids.pop_first() {
            // g3 = row i (E_2 → M), g2 = column j (M → E_3)
            let g3: Vec<(usize, SteenrodOp)> = rows[k][i].iter().filter(|(&c, _)| c != j).map(|(&c, e)| (c, e.clone())).collect();
            let g2: Vec<(usize, SteenrodOp)> =
                cols[k][j].iter().filter(|&&r| r != i).map(|&r| (r, rows[k][r][&j].clone())).collect();
            for (r, b) in &g2 {
                let idx = terms[k + 1][*r].expect("live row");
                for (cc, a) in &g3 {
                    let upd = truncate(&a.mul(b), idx);
                    if upd.is_zero() {
                        continue;
                    }
                    let slot = rows[k][*r].entry(*cc).or_default();
                    slot.add_assign(&upd);
                    if slot.is_zero() {
                        rows[k][*r].remove(cc);
                        cols[k][*cc].remove(r);
                        ids.remove(&(*r, *cc));
                    } else {
                        cols[k][*cc].insert(*r);
                        if *slot == one {
                            ids.insert((*r, *cc));
                        } else {
                            ids.remove(&(*r, *cc));
                        }
                    }
                }
            }
            // drop row i and column j of ∂_k
            for (cc, _) in std::mem::take(&mut rows[k][i]) {
                cols[k][cc].remove(&i);
            }
            for r in std::mem::take(&mut cols[k][j]) {
                rows[k][r].remove(&j);
                ids.remove(&(r, j));
            }
            ids.retain(|&(r, _)| r != i);
            // column j of term k is row j of ∂_{k-1}; row i of term k+1 is column i of ∂_{k+1}
            if k > 0 {
                for (cc, _) in std::mem::take(&mut rows[k - 1][j]) {
                    cols[k - 1][cc].remove(&j);
                }
            }
            if k + 1 < rows.len() {
                for r in std::mem::take(&mut cols[k + 1][i]) {
                    rows[k + 1][r].remove(&i);
                }
            }
            terms[k][j] = None;
            terms[k + 1][i] = None;
        }
    }
    // compact
    let live: Vec<Vec<usize>> = terms.iter().map(|t| (0..t.len()).filter(|&x| t[x].is_some()).collect()).collect();
    let mut mods: Vec<BGModule> = terms.iter().map(|t| BGModule::new(t.iter().flatten().copied().collect())).collect();
    let mut diffs: Vec<BGMorphism> = Vec::new();
    for k in 0..rows.len() {
        let mut f = BGMorphism::zero(mods[k].clone(), mods[k + 1].clone());
        let col_at: HashMap<usize, usize> = live[k].iter().enumerate().map(|(a, &b)| (b, a)).collect();
        for (ni, &i) in live[k + 1].iter().enumerate() {
            for (j, e) in &rows[k][i] {
                f.set(ni, col_at[j], e.clone()).expect("entries stay homogeneous");
            }
        }
        diffs.push(f);
    }
    while mods.len() > 1 && mods.last().is_some_and(BGModule::is_empty) {
        mods.pop();
        diffs.pop();
    }
    if diffs.is_empty() {
        BGComplex::single(mods.into_iter().next().unwrap_or_default())
    } else {
        BGComplex::from_parts(mods, diffs).expect("cancellation preserves d∘d = 0")
    }
}

/// Degree `r` → index `s` → multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PoincareClass(pub BTreeMap<usize, BTreeMap<u32, usize>>);

impl PoincareClass {
    pub fn add(&mut self, r: usize, s: u32, mult: usize) {
        if mult == 0 {
            return;
        }
        *self.0.entry(r).or_default().entry(s).or_default() += mult;
    }

    pub fn get(&self, r: usize, s: u32) -> usize {
        self.0.get(&r).and_then(|m| m.get(&s)).copied().unwrap_or(0)
    }

    pub fn union(&self, other: &PoincareClass) -> PoincareClass {
        let mut out = self.clone();
        for (r, m) in &other.0 {
            for (s, c) in m {
                out.add(*r, *s, *c);
            }
        }
        out
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> PoincareClass {
        PoincareClass(self.0.iter().map(|(r, m)| (r + k, m.clone())).collect())
    }

    pub fn module_at(&self, r: usize) -> BGModule {
        let mut v = Vec::new();
        if let Some(m) = self.0.get(&r) {
            for (s, c) in m {
                v.extend(std::iter::repeat_n(*s, *c));
            }
        }
        BGModule::new(v)
    }
}

pub fn poincare(c: &BGComplex) -> PoincareClass {
    let mut p = PoincareClass::default();
    for (r, t) in c.terms().iter().enumerate() {
        for &s in t.summands() {
            p.add(r, s, 1);
        }
    }
    p
}

/// Homology of `R(I)`: `(r, s)` → dimension, nonzero cells only.
pub fn ext_complex(c: &BGComplex) -> BTreeMap<(usize, u32), usize> {
    // rank of the Sq^0 part of each differential restricted to index s
    let mut ranks: Vec<BTreeMap<u32, usize>> = Vec::new();
    let one = SteenrodOp::one();
    for d in c.diffs() {
        let mut by_s: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, j, e) in d.nonzero() {
            if *e == one {
                by_s.entry(d.target().summands()[i]).or_default().push((i, j));
            }
        }
        let mut rk = BTreeMap::new();
        for (s, pairs) in by_s {
            let mut m = F2Matrix::zeros(d.target().len(), d.source().len());
            for (i, j) in pairs {
                m.set(i, j, true);
            }
            rk.insert(s, rank(&m));
        }
        ranks.push(rk);
    }
    let mut out = BTreeMap::new();
    for (r, t) in c.terms().iter().enumerate() {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &s in t.summands() {
            *counts.entry(s).or_default() += 1;
        }
        for (s, n) in counts {
            let out_rk = ranks.get(r).and_then(|m| m.get(&s)).copied().unwrap_or(0);
            let in_rk = if r > 0 { ranks[r - 1].get(&s).copied().unwrap_or(0) } else { 0 };
            let h = n - out_rk - in_rk;
            if h > 0 {
                out.insert((r, s), h);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub position: usize,
    pub j_index: u32,
    pub lambda_weight: u32,
    /// Admissible sequence `(k_0, …, k_{r-1})`; empty for graphs read off a complex.
    pub seq: Vec<u32>,
}

/// Vertices are summands, edges are nonzero `•Sq^k` entries from position `r` to `r+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BGGraph {
    vertices: Vec<Vertex>,
    by_position: Vec<Vec<usize>>,
    out: Vec<BTreeMap<usize, u32>>,
}

impl BGGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn at_position(&self, r: usize) -> impl Iterator<Item = &Vertex> {
        self.by_position.get(r).into_iter().flatten().map(|&v| &self.vertices[v])
    }

    pub fn positions(&self) -> usize {
        self.by_position.len()
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<u32> {
        self.out[from].get(&to).copied()
    }

    /// `(to, k)` for the edges out of `v`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (&usize, &u32)> {
        self.out[v].iter()
    }

    /// `(from, to, k)` for every edge labelled `Sq^k`, ordered by source id.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.out.iter().enumerate().flat_map(|(v, m)| m.iter().map(move |(&w, &k)| (v, w, k)))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(BTreeMap::len).sum()
    }

    pub fn vertex_by_seq(&self, seq: &[u32]) -> Option<&Vertex> {
        self.by_position.get(seq.len())?.iter().map(|&v| &self.vertices[v]).find(|v| v.seq == seq)
    }

    fn toggle(&mut self, from: usize, to: usize, k: u32) {
        if self.out[from].remove(&to).is_none() {
            self.out[from].insert(to, k);
        }
    }

    /// Read the complex back. Vertex order at each position is summand order.
    pub fn to_complex(&self) -> BGComplex {
        let mods: Vec<BGModule> = self
            .by_position
            .iter()
            .map(|vs| BGModule::new(vs.iter().map(|&v| self.vertices[v].j_index).collect()))
            .collect();
        if mods.len() <= 1 {
            return BGComplex::single(mods.into_iter().next().unwrap_or_default());
        }
        let mut diffs = Vec::new();
        for r in 0..mods.len() - 1 {
            let mut f = BGMorphism::zero(mods[r].clone(), mods[r + 1].clone());
            for (j, &v) in self.by_position[r].iter().enumerate() {
                for (&w, &k) in &self.out[v] {
                    let i = self.by_position[r + 1].iter().position(|&x| x == w).expect("edges go one step");
                    f.set(i, j, SteenrodOp::sq(k)).expect("label degree is the index drop");
                }
            }
            diffs.push(f);
        }
        BGComplex::from_parts(mods, diffs).expect("graph closure leaves a complex")
    }

    /// Graph of a complex whose entries are all single `Sq^k`; other entries are rejected.
    pub fn from_complex(c: &BGComplex) -> Option<BGGraph> {
        let mut vertices = Vec::new();
        let mut by_position = Vec::new();
        for (r, t) in c.terms().iter().enumerate() {
            let mut ids = Vec::new();
            for &s in t.summands() {
                ids.push(vertices.len());
                vertices.push(Vertex { id: vertices.len(), position: r, j_index: s, lambda_weight: 0, seq: Vec::new() });
            }
            by_position.push(ids);
        }
        let mut out = vec![BTreeMap::new(); vertices.len()];
        for (r, d) in c.diffs().iter().enumerate() {
            for (i, j, e) in d.nonzero() {
                if e.num_terms() != 1 {
                    return None;
                }
                let m = e.terms().next().unwrap();
                if m.len() > 1 {
                    return None;
                }
                out[by_position[r][j]].insert(by_position[r + 1][i], m.degree());
            }
        }
        Some(BGGraph { vertices, by_position, out })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  v{} [label=\"J({})@{}\"];", v.id, v.j_index, v.position);
        }
        for (v, w, k) in self.edges() {
            let _ = writeln!(s, "  v{v} -> v{w} [label=\"Sq^{k}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> =
            self.edges().map(|(v, w, k)| serde_json::json!({"from": v, "to": w, "label": format!("Sq^{k}")})).collect();
        serde_json::json!({ "vertices": self.vertices, "edges": edges })
    }
}

/// `G(m, n)` restricted to vertices of Lambda weight at most `max_weight`.
///
/// Edges of weight-bounded vertices only involve weight-bounded vertices, so the
/// restriction is the full subgraph.
pub fn build_graph_truncated(m: u32, n: u32, max_weight: u32) -> Result<BGGraph, PsrError> {
    let total = m + n;
    let mut vertices = vec![Vertex { id: 0, position: 0, j_index: total, lambda_weight: 0, seq: Vec::new() }];
    let mut by_position = vec![vec![0]];
    let mut e0: Vec<(usize, usize, u32)> = Vec::new();
    loop {
        let mut layer = Vec::new();
        for &p in by_position.last().unwrap() {
            let pv = vertices[p].clone();
            let low = match pv.seq.last() {
                None => n / 2 + 1,
                Some(&k) => k / 2 + 1,
            };
            let rest = total - pv.lambda_weight;
            for k in low..=rest / 2 {
                if pv.lambda_weight + k > max_weight {
                    break;
                }
                let mut seq = pv.seq.clone();
                seq.push(k);
                layer.push(Vertex { id: 0, position: pv.position + 1, j_index: rest - k, lambda_weight: pv.lambda_weight + k, seq });
                e0.push((p, usize::MAX, k));
            }
        }
        if layer.is_empty() {
            break;
        }
        // summand order: index descending, stable
        let mut order: Vec<usize> = (0..layer.len()).collect();
        order.sort_by(|&a, &b| layer[b].j_index.cmp(&layer[a].j_index));
        let base_id = vertices.len();
        let first_edge = e0.len() - layer.len();
        let mut ids = Vec::new();
        let mut new_id = vec![0; layer.len()];
        for (pos, &li) in order.iter().enumerate() {
            new_id[li] = base_id + pos;
        }
        let mut placed: Vec<Option<Vertex>> = vec![None; layer.len()];
        for (li, mut v) in layer.into_iter().enumerate() {
            v.id = new_id[li];
            placed[new_id[li] - base_id] = Some(v);
        }
        for v in placed.into_iter().flatten() {
            ids.push(v.id);
            vertices.push(v);
        }
        for (li, e) in e0[first_edge..].iter_mut().enumerate() {
            e.1 = new_id[li];
        }
        by_position.push(ids);
    }
    let mut g = BGGraph { out: vec![BTreeMap::new(); vertices.len()], vertices, by_position };
    // E⁰ child lookup: (parent, label) → child
    let mut child: HashMap<(usize, u32), usize> = HashMap::new();
    for &(p, c, k) in &e0 {
        g.out[p].insert(c, k);
        child.insert((p, k), c);
    }
    close_edges(&mut g, &child)?;
    Ok(g)
}

/// `G(m, n)`.
pub fn build_graph(m: u32, n: u32) -> Result<BGGraph, PsrError> {
    build_graph_truncated(m, n, u32::MAX)
}

fn close_edges(g: &mut BGGraph, child: &HashMap<(usize, u32), usize>) -> Result<(), PsrError> {
    const MAX_ROUNDS: usize = 1000;
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for i in 0..g.positions().saturating_sub(2) {
            for vi in 0..g.by_position[i].len() {
                let v = g.by_position[i][vi];
                let mut sums: BTreeMap<usize, SteenrodOp> = BTreeMap::new();
                for (&u, &a) in &g.out[v] {
                    for (&w, &b) in &g.out[u] {
                        sums.entry(w).or_default().add_monomial(Monomial::new([a, b]));
                    }
                }
                for (w, s) in sums {
                    let red = truncate(&s, g.vertices[w].j_index);
                    for t in red.terms() {
                        let (i1, i2) = match t.indices() {
                            [a] => (*a, 0),
                            [a, b] => (*a, *b),
                            _ => (0, 0),
                        };
                        let z = *child.get(&(v, i1)).ok_or(PsrError::ClosureStuck { from: v, to: w, label: i1 })?;
                        g.toggle(z, w, i2);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Err(PsrError::ClosureDiverged(MAX_ROUNDS))
}
