//! Spheres: the Bockstein sequence, minimal resolutions of `Σ^t F2`, Ext
//! tables, the range formula, saturation, the algebraic EHP sequence, James
//! splitting and the `CP^∞` sum formula.
//!
//! `Ext^s(Σ^n, Σ^t)` always means `Ext_U^s(Σ^n F2, Σ^t F2)`: `n` is the sphere
//! mapped in, `t` the suspension being resolved.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::brown_gitler::{realize_in_degree, BGComplex, BGModule, BGMorphism};
use crate::f2_linalg::{rank, F2Matrix};
use crate::psr::{
    build_graph, build_graph_truncated, minimal_reduce, poincare, suspend_complex, suspend_complex_with_layout,
    PoincareClass, PsrError,
};
use crate::steenrod::SteenrodOp;
use crate::Report;

/// `𝒥(n)`: the index `2k` when `n + 1 = 4k`.
pub fn bockstein_extra(n: u32) -> Option<u32> {
    (n % 4 == 3).then(|| n.div_ceil(2))
}

/// `J(n) ⊕ 𝒥(n)`.
pub fn bockstein_term(n: u32) -> BGModule {
    let mut v = vec![n];
    v.extend(bockstein_extra(n));
    BGModule::new(v)
}

/// The map `J(n+1) ⊕ 𝒥(n+1) → J(n) ⊕ 𝒥(n)`: `•Sq^1` into `J(n)`, `•Sq^{(n+1)/2}`
/// into `𝒥(n)`, zero on `𝒥(n+1)`.
pub fn bockstein_map(n: u32) -> BGMorphism {
    let src = bockstein_term(n + 1);
    let tgt = bockstein_term(n);
    let mut f = BGMorphism::zero(src.clone(), tgt.clone());
    let j = src.summands().iter().position(|&x| x == n + 1).unwrap();
    let i = tgt.summands().iter().position(|&x| x == n).unwrap();
    f.set(i, j, SteenrodOp::sq(1)).expect("degree 1");
    if let Some(e) = bockstein_extra(n) {
        let i = tgt.summands().iter().position(|&x| x == e).unwrap();
        f.set(i, j, SteenrodOp::sq(e)).expect("degree (n+1)/2");
    }
    f
}

/// Window `n_max → n_max - 1 → … → n_min`; position `p` carries label `n_max - p`.
pub fn bockstein_complex(n_min: u32, n_max: u32) -> BGComplex {
    assert!(1 <= n_min && n_min <= n_max, "need 1 <= n_min <= n_max");
    if n_min == n_max {
        return BGComplex::single(bockstein_term(n_max));
    }
    let diffs = (n_min..n_max).rev().map(bockstein_map).collect();
    BGComplex::new(diffs).expect("Sq^1 Sq^1 = 0 and Sq^1 Sq^{2k} truncates")
}

/// Exactness at interior positions of a complex in degrees `0..=d_max`.
pub fn interior_exactness(c: &BGComplex, d_max: u32, skip: usize, label: impl Fn(usize) -> String) -> Report {
    let mut rep = Report::new();
    let n = c.terms().len();
    for d in 0..=d_max {
        let ranks: Vec<usize> = c.diffs().iter().map(|f| rank(&realize_in_degree(f, d))).collect();
        for p in skip.max(1)..n.saturating_sub(skip.max(1)) {
            let dim = c.terms()[p].dim(d);
            let got = ranks[p - 1] + ranks.get(p).copied().unwrap_or(0);
            rep.record(got == dim, || format!("{} degree {d}: ranks {got} vs dim {dim}", label(p)));
        }
    }
    rep
}

/// Exactness of the window `[1, n_max]` at interior positions, degrees `<= d_max`.
pub fn bockstein_verify(n_max: u32, d_max: u32) -> Report {
    let c = bockstein_complex(1, n_max);
    interior_exactness(&c, d_max, 1, |p| format!("label {}", n_max - p as u32))
}

/// A minimal injective resolution of `Σ^t F2`.
pub fn sphere_min_resolution(t: u32) -> Result<BGComplex, PsrError> {
    if t == 0 {
        return Ok(BGComplex::single(BGModule::j(0)));
    }
    Ok(minimal_reduce(&build_graph(t - 1, 1)?.to_complex()))
}

/// The part of a minimal resolution of `Σ^t F2` with indices at least `n_min`,
/// which is all that `Ext^s(Σ^n, Σ^t)` for `n >= n_min` sees.
pub fn sphere_resolution_above(t: u32, n_min: u32) -> Result<BGComplex, PsrError> {
    if t == 0 || n_min <= 1 {
        return sphere_min_resolution(t);
    }
    let w = t.saturating_sub(n_min);
    Ok(minimal_reduce(&build_graph_truncated(t - 1, 1, w)?.to_complex()))
}

/// Dimensions of `Ext^s(Σ^n, Σ^t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtTable {
    /// (s, n, t) → dim, nonzero only
    entries: BTreeMap<(usize, u32, u32), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtRecord {
    pub s: usize,
    pub n: u32,
    pub t: u32,
    pub dim: usize,
}

impl ExtTable {
    pub fn get(&self, s: usize, n: u32, t: u32) -> usize {
        self.entries.get(&(s, n, t)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, s: usize, n: u32, t: u32, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(s, n, t));
        } else {
            self.entries.insert((s, n, t), dim);
        }
    }

    /// Nonzero cells ordered by `(s, n, t)`.
    pub fn records(&self) -> Vec<ExtRecord> {
        self.entries.iter().map(|(&(s, n, t), &dim)| ExtRecord { s, n, t, dim }).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,n,t,dim\n");
        for r in self.records() {
            let _ = writeln!(out, "{},{},{},{}", r.s, r.n, r.t, r.dim);
        }
        out
    }

    /// Read the cells `n >= n_min`, `s <= s_max` off a minimal resolution of `Σ^t`.
    pub fn add_resolution(&mut self, t: u32, c: &BGComplex, n_min: u32, n_max: u32, s_max: usize) {
        for (s, term) in c.terms().iter().enumerate().take(s_max.saturating_add(1)) {
            for &n in term.summands() {
                if n >= n_min && n <= n_max {
                    *self.entries.entry((s, n, t)).or_default() += 1;
                }
            }
        }
    }
}

impl Serialize for ExtTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.records())
    }
}

/// Minimal resolutions of `Σ^t` for `t` in a range, built in parallel.
pub fn sphere_resolutions(ts: &[u32]) -> Result<Vec<BGComplex>, PsrError> {
    std::thread::scope(|sc| {
        let hs: Vec<_> = ts.iter().map(|&t| sc.spawn(move || sphere_min_resolution(t))).collect();
        hs.into_iter().map(|h| h.join().expect("resolution worker panicked")).collect()
    })
}

/// `Ext^s(Σ^n, Σ^t)` for `n <= n_max`, `t <= t_max`, `s <= s_max`.
pub fn ext_table(n_max: u32, t_max: u32, s_max: usize) -> Result<ExtTable, PsrError> {
    let ts: Vec<u32> = (0..=t_max).collect();
    let res = sphere_resolutions(&ts)?;
    let mut tab = ExtTable::default();
    for (t, c) in ts.iter().zip(&res) {
        tab.add_resolution(*t, c, 0, n_max, s_max);
    }
    Ok(tab)
}

/// `Ext^s(Σ^n, Σ^{n+w})` for `w <= w_max`, `n_min <= n <= n_max`, from the
/// weight-truncated graphs.
pub fn ext_band(n_min: u32, n_max: u32, w_max: u32) -> Result<ExtTable, PsrError> {
    let ts: Vec<u32> = (n_min..=n_max + w_max).collect();
    let res: Vec<Result<BGComplex, PsrError>> = std::thread::scope(|sc| {
        let hs: Vec<_> = ts
            .iter()
            .map(|&t| sc.spawn(move || sphere_resolution_above(t, t.saturating_sub(w_max).max(n_min))))
            .collect();
        hs.into_iter().map(|h| h.join().expect("resolution worker panicked")).collect()
    });
    let mut tab = ExtTable::default();
    for (&t, c) in ts.iter().zip(res) {
        let lo = t.saturating_sub(w_max).max(n_min);
        tab.add_resolution(t, &c?, lo, n_max.min(t), usize::MAX);
    }
    Ok(tab)
}

/// The printed range formula, read in the `(n, s, t)` dictionary above:
/// `F2` if `n = t - s`, `F2` if `t - s - 1 ≡ 0 (4)` and `t - s - 1 = 2n`, else 0.
/// Meant for `s > [t/2]`.
pub fn ressphere_formula(s: usize, n: u32, t: u32) -> usize {
    let s = s as i64;
    let (n, t) = (n as i64, t as i64);
    let mut dim = 0;
    if n == t - s {
        dim += 1;
    }
    let q = t - s - 1;
    if q >= 0 && q % 4 == 0 && q == 2 * n {
        dim += 1;
    }
    dim
}

/// Top terms `I^k ≅ J(t-k) ⊕ 𝒥(t-k)` for `k > [t/2]` and length `t - 1`.
pub fn term_formula_check(t_min: u32, t_max: u32) -> Result<Report, PsrError> {
    let ts: Vec<u32> = (t_min..=t_max).collect();
    let res = sphere_resolutions(&ts)?;
    let mut rep = Report::new();
    for (&t, c) in ts.iter().zip(&res) {
        let len = c.len();
        rep.record(len == t as usize, || format!("t={t}: last nonzero position {} instead of {}", len as i64 - 1, t - 1));
        for k in (t / 2 + 1) as usize..t as usize {
            let want = bockstein_term(t - k as u32);
            let got = c.term(k);
            rep.record(got == want, || format!("t={t}, position {k}: {got} instead of {want}"));
        }
        rep.record(c.term(t as usize).is_empty(), || format!("t={t}: term {t} is nonzero"));
    }
    Ok(rep)
}

/// Compare computed Ext with [`ressphere_formula`] for `2 <= t <= t_max`, `s > [t/2]`.
pub fn ressphere_check(t_max: u32) -> Result<Report, PsrError> {
    let tab = ext_table(t_max, t_max, t_max as usize)?;
    let mut rep = Report::new();
    for t in 2..=t_max {
        for s in (t / 2 + 1) as usize..=t as usize {
            for n in 0..=t {
                let got = tab.get(s, n, t);
                let want = ressphere_formula(s, n, t);
                rep.record(got == want, || format!("Ext^{s}(Σ^{n}, Σ^{t}): computed {got}, formula {want}"));
            }
        }
    }
    Ok(rep)
}

/// The form the computed tables follow: `F2` if `n = t - s >= 1`, `F2` if
/// `t - s + 1 ≡ 0 (4)` and `t - s + 1 = 2n`, else 0.
pub fn ressphere_formula_corrected(s: usize, n: u32, t: u32) -> usize {
    let s = s as i64;
    let (n, t) = (n as i64, t as i64);
    let q = t - s + 1;
    usize::from(n >= 1 && n == t - s) + usize::from(q > 0 && q % 4 == 0 && q == 2 * n)
}

/// [`ressphere_check`] against [`ressphere_formula_corrected`].
pub fn ressphere_check_corrected(t_max: u32) -> Result<Report, PsrError> {
    let tab = ext_table(t_max, t_max, t_max as usize)?;
    let mut rep = Report::new();
    for t in 2..=t_max {
        for s in (t / 2 + 1) as usize..=t as usize {
            for n in 0..=t {
                let got = tab.get(s, n, t);
                let want = ressphere_formula_corrected(s, n, t);
                rep.record(got == want, || format!("Ext^{s}(Σ^{n}, Σ^{t}): computed {got}, formula {want}"));
            }
        }
    }
    Ok(rep)
}

/// Poincaré class of a window `[n_min, n_max]` of Bockstein terms, position `p`
/// carrying label `n_max - p`.
pub fn bockstein_class(n_min: u32, n_max: u32) -> PoincareClass {
    poincare(&bockstein_complex(n_min, n_max))
}

/// Suspend the Bockstein window `[n_min, n_max]` and reduce, `k` times, and compare
/// each interior position with the window `[n_min + k, n_max + k]`.
///
/// Positions within `k` of either end are discarded.
pub fn saturation_check(k_max: usize, n_min: u32, n_max: u32) -> Result<Report, PsrError> {
    saturation_check_on(&bockstein_complex(n_min, n_max), k_max, n_min, n_max)
}

/// [`saturation_check`] starting from an arbitrary complex standing in for the window.
pub fn saturation_check_on(start: &BGComplex, k_max: usize, n_min: u32, n_max: u32) -> Result<Report, PsrError> {
    let mut rep = Report::new();
    let mut c = start.clone();
    let len = (n_max - n_min + 1) as usize;
    for k in 1..=k_max {
        c = minimal_reduce(&suspend_complex(&c)?);
        let want = bockstein_class(n_min + k as u32, n_max + k as u32);
        let got = poincare(&c);
        for p in k..len.saturating_sub(k) {
            let (g, w) = (got.module_at(p), want.module_at(p));
            rep.record(g == w, || format!("k={k}, position {p} (label {}): {g} instead of {w}", n_max - p as u32));
        }
    }
    Ok(rep)
}

/// The `P` maps of the EHP sequence into `S^q`, read off `Ψ` of a minimal resolution
/// of `Σ^t`.
///
/// In term `s` of `Ψ(B)`, `C_s` collects the `J(q)` coming from `ℓB^s`
/// (`J(q-1)` in `B^s`) and `D_s` those coming from `Φ̃ℓB^{s-1}` (`J(2q-1)` in
/// `B^{s-1}`). `P^s` is the `Sq^0` block `D_s → C_{s+1}`.
pub struct EhpData {
    pub q: u32,
    pub t: u32,
    /// `|C_s|`, `|D_s|`
    pub c_dims: Vec<usize>,
    pub d_dims: Vec<usize>,
    /// `p[s]` is `|C_{s+1}| × |D_s|`
    pub p: Vec<F2Matrix>,
    /// Number of `Sq^0` entries `D_s → D_{s+1}` and `C_s → C_{s+1}`; both should vanish.
    pub stray_sq0: usize,
}

/// EHP data for every `q` at once from one suspension of `B`.
pub fn ehp_data_all(b: &BGComplex, t: u32, qs: &[u32]) -> Result<Vec<EhpData>, PsrError> {
    let (c, layout) = suspend_complex_with_layout(b)?;
    let one = SteenrodOp::one();
    let nterms = c.terms().len();
    let mut out = Vec::new();
    for &q in qs {
        // per term: positions of C and D summands of index q
        let mut cpos: Vec<Vec<usize>> = Vec::new();
        let mut dpos: Vec<Vec<usize>> = Vec::new();
        for s in 0..nterms {
            let summ = c.terms()[s].summands();
            let (mut cs, mut ds) = (Vec::new(), Vec::new());
            for (i, o) in layout[s].iter().enumerate() {
                if summ[i] != q {
                    continue;
                }
                if o.t == 0 {
                    cs.push(i);
                } else {
                    ds.push(i);
                }
            }
            cpos.push(cs);
            dpos.push(ds);
        }
        let mut p = Vec::new();
        let mut stray = 0;
        for s in 0..nterms {
            let f = c.diff(s);
            let empty = Vec::new();
            let next_c = cpos.get(s + 1).unwrap_or(&empty);
            let next_d = dpos.get(s + 1).unwrap_or(&empty);
            let mut m = F2Matrix::zeros(next_c.len(), dpos[s].len());
            if s + 1 < nterms {
                for (jj, &j) in dpos[s].iter().enumerate() {
                    for (ii, &i) in next_c.iter().enumerate() {
                        if *f.entry(i, j) == one {
                            m.set(ii, jj, true);
                        }
                    }
                    stray += next_d.iter().filter(|&&i| *f.entry(i, j) == one).count();
                }
                for &j in &cpos[s] {
                    stray += next_c.iter().chain(next_d).filter(|&&i| *f.entry(i, j) == one).count();
                }
            }
            p.push(m);
        }
        out.push(EhpData {
            q,
            t,
            c_dims: cpos.iter().map(Vec::len).collect(),
            d_dims: dpos.iter().map(Vec::len).collect(),
            p,
            stray_sq0: stray,
        });
    }
    Ok(out)
}

impl EhpData {
    fn c(&self, s: usize) -> usize {
        self.c_dims.get(s).copied().unwrap_or(0)
    }

    fn d(&self, s: usize) -> usize {
        self.d_dims.get(s).copied().unwrap_or(0)
    }

    fn p_rank(&self, s: usize) -> usize {
        self.p.get(s).map_or(0, rank)
    }

    /// `dim coker P^{s-1} + dim ker P^s`, the EHP prediction for `E^{s,t+1}(S^q)`.
    pub fn predicted(&self, s: usize) -> usize {
        let coker = self.c(s) - if s > 0 { self.p_rank(s - 1) } else { 0 };
        let ker = self.d(s) - self.p_rank(s);
        coker + ker
    }

    pub fn p_is_zero(&self) -> bool {
        self.p.iter().all(F2Matrix::is_zero)
    }
}

/// For `1 <= t <= t_max`, `s <= s_max`, `q` in `qs`: the EHP terms against
/// independently computed tables, `E^{s,t+1}(S^q)` against the prediction, and no
/// stray `Sq^0` entries.
fn ehp_core(qs: &[u32], s_max: usize, t_max: u32, check_zero_p: bool) -> Result<Report, PsrError> {
    let n_max = qs.iter().map(|q| 2 * q).max().unwrap_or(0);
    let tab = ext_table(n_max, t_max + 1, s_max + 1)?;
    let ts: Vec<u32> = (0..=t_max).collect();
    let res = sphere_resolutions(&ts)?;
    let per_t: Vec<Result<Vec<EhpData>, PsrError>> = std::thread::scope(|sc| {
        let hs: Vec<_> = ts.iter().zip(&res).map(|(&t, b)| sc.spawn(move || ehp_data_all(b, t, qs))).collect();
        hs.into_iter().map(|h| h.join().expect("EHP worker panicked")).collect()
    });
    let mut rep = Report::new();
    for (t, data) in ts.iter().copied().zip(per_t) {
        for e in data? {
            let q = e.q;
            rep.record(e.stray_sq0 == 0, || format!("q={q}, t={t}: {} Sq^0 entries outside D → C", e.stray_sq0));
            if check_zero_p {
                rep.record(e.p_is_zero(), || format!("q={q}, t={t}: P is nonzero"));
            }
            for s in 0..=s_max {
                let c_want = tab.get(s, q - 1, t);
                let d_want = if s == 0 { 0 } else { tab.get(s - 1, 2 * q - 1, t) };
                rep.record(e.c(s) == c_want, || format!("q={q}, s={s}, t={t}: |C| = {} vs E^{s},{t}(S^{}) = {c_want}", e.c(s), q - 1));
                rep.record(e.d(s) == d_want, || format!("q={q}, s={s}, t={t}: |D| = {} vs E^{},{t}(S^{}) = {d_want}", e.d(s), s as i64 - 1, 2 * q - 1));
                let got = tab.get(s, q, t + 1);
                let pred = e.predicted(s);
                rep.record(got == pred, || format!("q={q}, s={s}, t={t}: E^{s},{}(S^{q}) = {got}, EHP gives {pred}", t + 1));
            }
        }
    }
    Ok(rep)
}

/// EHP windows `E(S^n) → E(S^{n+1}) → E(S^{2n+1})` for every `n` in `1..=n_max`.
pub fn ehp_verify(n_max: u32, s_max: usize, t_max: u32) -> Result<Report, PsrError> {
    let qs: Vec<u32> = (2..=n_max + 1).collect();
    ehp_core(&qs, s_max, t_max, false)
}

/// Additivity `E^{s,t+1}(S^{2^k}) = E^{s,t}(S^{2^k-1}) + E^{s-1,t}(S^{2^{k+1}-1})` and
/// vanishing of the `P` maps into `S^{2^k}`, for each `k` in `ks`.
pub fn james_check(ks: &[u32], s_max: usize, t_max: u32) -> Result<Report, PsrError> {
    let qs: Vec<u32> = ks.iter().map(|&k| 1 << k).collect();
    let n_max = qs.iter().map(|q| 2 * q).max().unwrap_or(0);
    let tab = ext_table(n_max, t_max + 1, s_max + 1)?;
    let mut rep = Report::new();
    for &q in &qs {
        for t in 0..=t_max {
            for s in 0..=s_max {
                let lhs = tab.get(s, q, t + 1);
                let rhs = tab.get(s, q - 1, t) + if s == 0 { 0 } else { tab.get(s - 1, 2 * q - 1, t) };
                rep.record(lhs == rhs, || format!("q={q}, s={s}, t={t}: {lhs} vs {rhs}"));
            }
        }
    }
    let pqs: Vec<u32> = qs.iter().copied().filter(|&q| q >= 2).collect();
    rep.merge(ehp_core(&pqs, s_max, t_max, true)?);
    Ok(rep)
}

/// `Σ_{m+q=s} dim Ext^q(Σ^n, Σ^{k+m})`, keyed `(s, n, k)`.
pub fn cp_infinity_table(n_max: u32, k_max: u32, s_max: usize) -> Result<ExtTable, PsrError> {
    let tab = ext_table(n_max, k_max + s_max as u32, s_max)?;
    let mut out = ExtTable::default();
    for s in 0..=s_max {
        for n in 0..=n_max {
            for k in 0..=k_max {
                let dim = (0..=s).map(|m| tab.get(s - m, n, k + m as u32)).sum();
                out.set(s, n, k, dim);
            }
        }
    }
    Ok(out)
}

/// `Ext^s(Σ^n, Σ^{n+w})` is the same for all `w <= n <= n_max`, for `w <= w_max`.
pub fn stabilization_check(w_max: u32, n_max: u32) -> Result<Report, PsrError> {
    let tab = ext_band(1, n_max, w_max)?;
    let mut rep = Report::new();
    for w in 1..=w_max {
        for s in 0..=w as usize {
            let base = tab.get(s, w, 2 * w);
            for n in w + 1..=n_max {
                let got = tab.get(s, n, n + w);
                rep.record(got == base, || format!("Ext^{s}(Σ^{n}, Σ^{}) = {got} but {base} at n={w}", n + w));
            }
        }
    }
    Ok(rep)
}

/// Stable `Ext^s(Σ^n, Σ^{n+w})` for `w <= w_max`, read at `n = w_max`.
pub fn stable_ext(w_max: u32) -> Result<BTreeMap<(usize, u32), usize>, PsrError> {
    let n = w_max.max(1);
    let tab = ext_band(n, n, w_max)?;
    let mut out = BTreeMap::new();
    for r in tab.records() {
        out.insert((r.s, r.t - r.n), r.dim);
    }
    Ok(out)
}

/// `len(minimal_reduce(G(m, n))) - 1 <= [(m+n)/2]` for `n >= 2`, `m + n <= total_max`.
pub fn injdim_check(total_max: u32) -> Result<Report, PsrError> {
    let mut rep = Report::new();
    let mut jobs = Vec::new();
    for total in 2..=total_max {
        for n in 2..=total {
            jobs.push((total - n, n));
        }
    }
    let lens: Vec<Result<usize, PsrError>> = std::thread::scope(|sc| {
        let hs: Vec<_> = jobs
            .iter()
            .map(|&(m, n)| sc.spawn(move || build_graph(m, n).map(|g| minimal_reduce(&g.to_complex()).len())))
            .collect();
        hs.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for (&(m, n), len) in jobs.iter().zip(lens) {
        let len = len?;
        let bound = ((m + n) / 2) as usize;
        rep.record(len.saturating_sub(1) <= bound, || format!("G({m},{n}): injective dimension {} > {bound}", len - 1));
    }
    Ok(rep)
}
