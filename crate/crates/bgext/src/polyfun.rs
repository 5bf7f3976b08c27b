//! Strict polynomial functors over F2 at the level of Poincaré series: the
//! canonical resolutions of `Λ^d`, `Γ^d`, `S^d`, the twisted resolutions
//! `𝒮(d, r)` of `S^{d(r)}`, and evaluation of the Koszul complexes on `F2^v`.
//!
//! A series maps a degree to a multiset of compositions, each composition
//! naming a tensor product `F^{λ_1} ⊗ … ⊗ F^{λ_m}` of one flavor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::f2_linalg::{rank, F2Matrix};
use crate::steenrod::lucas_binom_mod2;
use crate::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Flavor {
    S,
    Gamma,
    Lambda,
}

impl Flavor {
    fn symbol(self) -> &'static str {
        match self {
            Flavor::S => "S",
            Flavor::Gamma => "Γ",
            Flavor::Lambda => "Λ",
        }
    }

    /// `dim F^a(F2^v)`.
    pub fn eval_dim(self, a: u32, v: u32) -> u128 {
        match self {
            Flavor::S | Flavor::Gamma => binomial(v as u64 + a as u64 - 1, a as u64),
            Flavor::Lambda => binomial(v as u64, a as u64),
        }
    }
}

/// Exact `C(n, k)`, 0 when `k > n`; `C(-1, 0)` reads as 1 for `F^0(F2^0)`.
fn binomial(n: u64, k: u64) -> u128 {
    if k == 0 {
        return 1;
    }
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Composition(v)
    }

    /// Parts sorted descending: the isomorphism class of the tensor product.
    pub fn sorted(&self) -> Composition {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Composition(v)
    }

    pub fn divisible_by(&self, q: u32) -> bool {
        self.0.iter().all(|p| p % q == 0)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `A(d, s)`: ordered compositions of `d` into `s` positive parts, lexicographic.
pub fn compositions(d: u32, s: u32) -> Vec<Composition> {
    fn go(d: u32, s: u32, buf: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if s == 0 {
            if d == 0 {
                out.push(Composition(buf.clone()));
            }
            return;
        }
        if d < s {
            return;
        }
        for first in 1..=d - (s - 1) {
            buf.push(first);
            go(d - first, s - 1, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(d, s, &mut Vec::new(), &mut out);
    out
}

/// `Σ_i [C_i] t^i` with multiplicities.
#[derive(Clone, PartialEq, Eq)]
pub struct PolySeries {
    pub flavor: Flavor,
    terms: BTreeMap<usize, BTreeMap<Composition, u64>>,
}

impl PolySeries {
    pub fn zero(flavor: Flavor) -> Self {
        PolySeries { flavor, terms: BTreeMap::new() }
    }

    /// The unit `F^0` in degree 0.
    pub fn unit(flavor: Flavor) -> Self {
        let mut s = Self::zero(flavor);
        s.add(0, Composition::default(), 1);
        s
    }

    pub fn single(flavor: Flavor, degree: usize, parts: Vec<u32>) -> Self {
        let mut s = Self::zero(flavor);
        s.add(degree, Composition(parts.into_iter().filter(|&p| p > 0).collect()), 1);
        s
    }

    pub fn add(&mut self, degree: usize, c: Composition, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.terms.entry(degree).or_default().entry(c).or_default() += mult;
    }

    pub fn add_series(&mut self, other: &PolySeries, shift: usize, mult: u64) {
        for (&d, m) in &other.terms {
            for (c, &k) in m {
                self.add(d + shift, c.clone(), k * mult);
            }
        }
    }

    pub fn get(&self, degree: usize, c: &Composition) -> u64 {
        self.terms.get(&degree).and_then(|m| m.get(c)).copied().unwrap_or(0)
    }

    /// `(composition, multiplicity)` in one degree.
    pub fn at(&self, degree: usize) -> impl Iterator<Item = (&Composition, u64)> {
        self.terms.get(&degree).into_iter().flatten().map(|(c, &k)| (c, k))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    /// Highest nonzero degree.
    pub fn length(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Tensor product: degrees add, compositions concatenate.
    pub fn tensor(&self, other: &PolySeries) -> PolySeries {
        let mut out = PolySeries::zero(self.flavor);
        for (&d1, m1) in &self.terms {
            for (c1, &k1) in m1 {
                for (&d2, m2) in &other.terms {
                    for (c2, &k2) in m2 {
                        out.add(d1 + d2, c1.concat(c2), k1 * k2);
                    }
                }
            }
        }
        out
    }

    /// The same series with each composition replaced by its sorted form.
    pub fn classes(&self) -> PolySeries {
        let mut out = PolySeries::zero(self.flavor);
        for (&d, m) in &self.terms {
            for (c, &k) in m {
                out.add(d, c.sorted(), k);
            }
        }
        out
    }

    /// `dim` of the degree-`i` term evaluated on `F2^v`.
    pub fn eval_dim(&self, degree: usize, v: u32) -> u128 {
        self.at(degree).map(|(c, k)| k as u128 * c.parts().iter().map(|&a| self.flavor.eval_dim(a, v)).product::<u128>()).sum()
    }

    /// `Σ (-1)^i dim C_i(F2^v)`.
    pub fn euler(&self, v: u32) -> i128 {
        self.degrees().map(|d| if d % 2 == 0 { self.eval_dim(d, v) as i128 } else { -(self.eval_dim(d, v) as i128) }).sum()
    }
}

impl fmt::Display for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, m) in &self.terms {
            for (c, k) in m {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if *k != 1 {
                    write!(f, "{k}·")?;
                }
                write!(f, "{}^{c} t^{d}", self.flavor.symbol())?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `{degree: [composition, …]}` with compositions repeated by multiplicity.
impl Serialize for PolySeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, Vec<String>> = self
            .terms
            .iter()
            .map(|(d, m)| {
                let v = m.iter().flat_map(|(c, &k)| std::iter::repeat_n(c.to_string(), k as usize)).collect();
                (d.to_string(), v)
            })
            .collect();
        m.serialize(s)
    }
}

/// `F(d, s) = ⊕_{A(d,s)} F^λ` in one degree.
fn family(d: u32, s: u32, degree: usize, out: &mut PolySeries, mult: u64) {
    for c in compositions(d, s) {
        out.add(degree, c, mult);
    }
}

/// `Σ_{s<d} F(d, d-s) t^s`.
fn koszul_closed(flavor: Flavor, d: u32) -> PolySeries {
    let mut out = PolySeries::zero(flavor);
    for s in 0..d {
        family(d, d - s, s as usize, &mut out, 1);
    }
    out
}

/// `Σ_{s<d} F(d, d-s) t^{2s} (1+t)^{d-s-1}`.
fn doubled_closed(flavor: Flavor, d: u32) -> PolySeries {
    let mut out = PolySeries::zero(flavor);
    for s in 0..d {
        let e = (d - s - 1) as u64;
        for j in 0..=e {
            family(d, d - s, (2 * s + j as u32) as usize, &mut out, binomial(e, j) as u64);
        }
    }
    out
}

pub fn cproj_lambda_closed(d: u32) -> PolySeries {
    koszul_closed(Flavor::Gamma, d)
}

pub fn cinj_lambda_closed(d: u32) -> PolySeries {
    koszul_closed(Flavor::S, d)
}

pub fn cinj_gamma_closed(d: u32) -> PolySeries {
    doubled_closed(Flavor::S, d)
}

pub fn cproj_s_closed(d: u32) -> PolySeries {
    doubled_closed(Flavor::Gamma, d)
}

/// The four canonical resolutions computed by their recursive definitions.
///
/// A resolution assembled from resolutions `I^{k,•}` of the terms `M^k` of an
/// acyclic complex has series `Σ_k t^k H(I^{k,•})`.
#[derive(Default)]
pub struct Resolutions {
    cproj_lambda: HashMap<u32, PolySeries>,
    cinj_lambda: HashMap<u32, PolySeries>,
    cinj_gamma: HashMap<u32, PolySeries>,
    cproj_s: HashMap<u32, PolySeries>,
}

impl Resolutions {
    pub fn new() -> Self {
        Self::default()
    }

    /// `C_proj(Λ^d)`: base case `Γ^n ⊗ Λ^{d-n}`, `0 < n <= d`, for `d <= 2`; then
    /// the terms `Γ^{d-s} ⊗ Λ^s` in degree `d-1-s` resolved by `Γ^{d-s} ⊗ C_proj(Λ^s)`.
    pub fn cproj_lambda(&mut self, d: u32) -> PolySeries {
        if let Some(h) = self.cproj_lambda.get(&d) {
            return h.clone();
        }
        let out = if d == 0 {
            PolySeries::unit(Flavor::Gamma)
        } else if d <= 2 {
            let mut out = PolySeries::zero(Flavor::Gamma);
            for n in 1..=d {
                out.add_series(&PolySeries::single(Flavor::Gamma, (n - 1) as usize, vec![n, d - n]), 0, 1);
            }
            out
        } else {
            let mut out = PolySeries::zero(Flavor::Gamma);
            for s in 0..d {
                let term = PolySeries::single(Flavor::Gamma, 0, vec![d - s]).tensor(&self.cproj_lambda(s));
                out.add_series(&term, (d - 1 - s) as usize, 1);
            }
            out
        };
        self.cproj_lambda.insert(d, out.clone());
        out
    }

    /// `C_inj(Λ^d)`: base case `Λ^n ⊗ S^{d-n}`, `0 <= n < d`, for `d <= 2`; then
    /// `C_inj(Λ^s) ⊗ S^{d-s}` in degree `d-1-s`.
    pub fn cinj_lambda(&mut self, d: u32) -> PolySeries {
        if let Some(h) = self.cinj_lambda.get(&d) {
            return h.clone();
        }
        let out = if d == 0 {
            PolySeries::unit(Flavor::S)
        } else if d <= 2 {
            let mut out = PolySeries::zero(Flavor::S);
            for n in 0..d {
                // Λ^1 = S^1, Λ^0 = 1
                out.add_series(&PolySeries::single(Flavor::S, (d - 1 - n) as usize, vec![n, d - n]), 0, 1);
            }
            out
        } else {
            let mut out = PolySeries::zero(Flavor::S);
            for s in 0..d {
                let term = self.cinj_lambda(s).tensor(&PolySeries::single(Flavor::S, 0, vec![d - s]));
                out.add_series(&term, (d - 1 - s) as usize, 1);
            }
            out
        };
        self.cinj_lambda.insert(d, out.clone());
        out
    }

    /// `C_inj(Γ^d)`: base `Γ^1 = S^1`; then `C_inj(Γ^s) ⊗ C_inj(Λ^{d-s})` in degree `d-1-s`.
    pub fn cinj_gamma(&mut self, d: u32) -> PolySeries {
        if let Some(h) = self.cinj_gamma.get(&d) {
            return h.clone();
        }
        let out = match d {
            0 => PolySeries::unit(Flavor::S),
            1 => PolySeries::single(Flavor::S, 0, vec![1]),
            _ => {
                let mut out = PolySeries::zero(Flavor::S);
                for s in 0..d {
                    let term = self.cinj_gamma(s).tensor(&self.cinj_lambda(d - s));
                    out.add_series(&term, (d - 1 - s) as usize, 1);
                }
                out
            }
        };
        self.cinj_gamma.insert(d, out.clone());
        out
    }

    /// `C_proj(S^d)`: base `S^1 = Γ^1`; then `C_proj(Λ^{d-s}) ⊗ C_proj(S^s)` in degree `d-1-s`.
    pub fn cproj_s(&mut self, d: u32) -> PolySeries {
        if let Some(h) = self.cproj_s.get(&d) {
            return h.clone();
        }
        let out = match d {
            0 => PolySeries::unit(Flavor::Gamma),
            1 => PolySeries::single(Flavor::Gamma, 0, vec![1]),
            _ => {
                let mut out = PolySeries::zero(Flavor::Gamma);
                for s in 0..d {
                    let term = self.cproj_lambda(d - s).tensor(&self.cproj_s(s));
                    out.add_series(&term, (d - 1 - s) as usize, 1);
                }
                out
            }
        };
        self.cproj_s.insert(d, out.clone());
        out
    }
}

/// Recursion against closed formula for the four families and `1 <= d <= d_max`.
///
/// Series are compared as multisets of ordered compositions; a failure also says
/// whether the isomorphism classes (sorted compositions) agree.
pub fn recursion_check(d_max: u32) -> Report {
    let mut res = Resolutions::new();
    let mut rep = Report::new();
    for d in 1..=d_max {
        let pairs = [
            ("C_proj(Λ)", res.cproj_lambda(d), cproj_lambda_closed(d)),
            ("C_inj(Λ)", res.cinj_lambda(d), cinj_lambda_closed(d)),
            ("C_inj(Γ)", res.cinj_gamma(d), cinj_gamma_closed(d)),
            ("C_proj(S)", res.cproj_s(d), cproj_s_closed(d)),
        ];
        for (name, rec, closed) in pairs {
            rep.record(rec == closed, || {
                let iso = rec.classes() == closed.classes();
                format!("{name}, d={d}: recursion {rec} vs closed {closed} (classes agree: {iso})")
            });
        }
    }
    rep
}

/// `𝒮(d, 1)`: `S^{2d-i} ⊗ S^i` in degree `i`, `0 <= i <= 2d`.
pub fn sdr_base(d: u32) -> PolySeries {
    let mut out = PolySeries::zero(Flavor::S);
    for i in 0..=2 * d {
        out.add_series(&PolySeries::single(Flavor::S, i as usize, vec![2 * d - i, i]), 0, 1);
    }
    out
}

/// `𝒮(d, r)`: each `S^λ` of `𝒮(d, r-1)` in degree `k` contributes `t^k H(⊗_i 𝒮(λ_i, 1))`.
pub fn sdr_series(d: u32, r: u32) -> PolySeries {
    assert!(d >= 1 && r >= 1, "sdr_series needs d, r >= 1");
    let mut cur = sdr_base(d);
    let mut base: HashMap<u32, PolySeries> = HashMap::new();
    for _ in 1..r {
        let mut next = PolySeries::zero(Flavor::S);
        let mut tensor_memo: HashMap<Composition, PolySeries> = HashMap::new();
        for k in cur.degrees().collect::<Vec<_>>() {
            for (c, mult) in cur.at(k).map(|(c, m)| (c.clone(), m)).collect::<Vec<_>>() {
                let h = tensor_memo
                    .entry(c.clone())
                    .or_insert_with(|| {
                        c.parts().iter().fold(PolySeries::unit(Flavor::S), |acc, &p| {
                            acc.tensor(base.entry(p).or_insert_with(|| sdr_base(p)))
                        })
                    })
                    .clone();
                next.add_series(&h, k, mult);
            }
        }
        cur = next;
    }
    cur
}

/// `dim Ext^k(I^(r), I^(r))`: summands `S^{(2^r)}` in degree `k` of `𝒮(1, r)`.
pub fn ext_twist(r: u32) -> BTreeMap<usize, u64> {
    let s = sdr_series(1, r);
    let top = Composition(vec![1 << r]);
    (0..=s.length().unwrap_or(0)).map(|k| (k, s.get(k, &top))).collect()
}

/// The closed value `F2` for even `k <= 2^{r+1} - 2`.
pub fn ext_twist_expected(r: u32, k: usize) -> u64 {
    u64::from(k.is_multiple_of(2) && k <= (1usize << (r + 1)) - 2)
}

/// Smallest `r` with `2^{r+1} - 2 >= k_max`.
pub fn maclane_r(k_max: usize) -> u32 {
    let mut r = 1;
    while (1usize << (r + 1)) - 2 < k_max {
        r += 1;
    }
    r
}

/// `HML^k(F2, I)` for `k <= k_max`, read off `ext_twist(r)` at a stable `r`.
pub fn maclane_table(k_max: usize) -> Vec<(usize, u64)> {
    let t = ext_twist(maclane_r(k_max));
    (0..=k_max).map(|k| (k, t.get(&k).copied().unwrap_or(0))).collect()
}

/// `ext_twist(r)` and `ext_twist(r+1)` agree in degrees `<= 2^{r+1} - 2`.
pub fn maclane_stability_check(r_max: u32) -> Report {
    let mut rep = Report::new();
    let tabs: Vec<BTreeMap<usize, u64>> = (1..=r_max + 1).map(ext_twist).collect();
    for r in 1..=r_max {
        let (a, b) = (&tabs[(r - 1) as usize], &tabs[r as usize]);
        for k in 0..=(1usize << (r + 1)) - 2 {
            let (x, y) = (a.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
            rep.record(x == y, || format!("degree {k}: ext_twist({r}) = {x}, ext_twist({}) = {y}", r + 1));
        }
    }
    rep
}

/// `k ↦ (2^{r+1} - 2) - k` symmetry of `ext_twist(r)`.
pub fn ext_twist_palindrome(r: u32) -> Report {
    let t = ext_twist(r);
    let top = (1usize << (r + 1)) - 2;
    let mut rep = Report::new();
    for k in 0..=top {
        let (a, b) = (t.get(&k).copied().unwrap_or(0), t.get(&(top - k)).copied().unwrap_or(0));
        rep.record(a == b, || format!("r={r}: degree {k} has {a}, degree {} has {b}", top - k));
    }
    rep
}

fn divisibility_by(d_max: u32, n_max: u32, step: impl Fn(u32, u32) -> u32) -> Report {
    let mut rep = Report::new();
    for d in 1..=d_max {
        for n in 1..=n_max {
            let series = sdr_series(d, n);
            let len = series.length().unwrap_or(0);
            for r in 0..=d.trailing_zeros() {
                let q = 1u32 << (n + r);
                let m = step(n, r);
                for s in 0..=len {
                    let has = series.at(s).any(|(c, _)| c.divisible_by(q));
                    rep.record(has == (s as u32).is_multiple_of(m), || {
                        format!("𝒮({d},{n}), r={r}, degree {s}: summand divisible by {q} is {has}, predicted {}", (s as u32).is_multiple_of(m))
                    });
                }
            }
        }
    }
    rep
}

/// For `d` divisible by `2^r`: degree `s` of `𝒮(d, n)` has a summand `S^λ` with
/// `2^{n+r} | λ` iff `2^{n+r} | s`. This only holds for `n = 1`; see
/// [`divisibility_check_corrected`].
pub fn divisibility_check(d_max: u32, n_max: u32) -> Report {
    divisibility_by(d_max, n_max, |n, r| 1 << (n + r))
}

/// The same pattern with period `2^{r+1}` for every `n`, which is what
/// `ext_twist` needs (`S^{(4)}` sits in degree 2 of `𝒮(1, 2)`).
pub fn divisibility_check_corrected(d_max: u32, n_max: u32) -> Report {
    divisibility_by(d_max, n_max, |_, r| 1 << (r + 1))
}

/// `Σ (-1)^i dim 𝒮(d,r)^i(F2^v) = dim S^d(F2^v)`.
pub fn sdr_euler_check(d_max: u32, r_max: u32, v_max: u32) -> Report {
    let mut rep = Report::new();
    for d in 1..=d_max {
        for r in 1..=r_max {
            let s = sdr_series(d, r);
            rep.record(s.length() == Some(((1usize << (r + 1)) - 2) * d as usize), || {
                format!("𝒮({d},{r}) has length {:?}", s.length())
            });
            for v in 1..=v_max {
                let want = Flavor::S.eval_dim(d, v) as i128;
                let got = s.euler(v);
                rep.record(got == want, || format!("𝒮({d},{r}) on F2^{v}: Euler characteristic {got}, expected {want}"));
            }
        }
    }
    rep
}

pub fn gldim(d: u32) -> u32 {
    2 * d - 2 * d.count_ones()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GldimWitness {
    pub d: u32,
    pub gldim: u32,
    /// lengths of `C_inj(Γ^d)` and `C_proj(S^d)`, the bound `2d - 2`
    pub cinj_gamma_len: usize,
    pub cproj_s_len: usize,
    /// length of `⊗_i C_inj(Γ^{2^{n_i}})` over the binary digits of `d`
    pub particular_len: usize,
    /// `dim coker(Hom(Γ(d,2), Γ^d) → Hom(Γ^d, Γ^d))`
    pub top_ext: usize,
}

/// `Hom(Γ^λ, Γ^d) = F2` for every composition `λ` of `d`, and precomposing the
/// multiplication `Γ^{(a,d-a)} → Γ^d` with the comultiplication is `C(d, a)`.
pub fn top_ext_witness(d: u32) -> usize {
    if d <= 1 {
        return 1;
    }
    let mut f = F2Matrix::zeros(1, (d - 1) as usize);
    for a in 1..d {
        f.set(0, (a - 1) as usize, lucas_binom_mod2(d as i64, a as i64));
    }
    1 - rank(&f)
}

pub fn gldim_witness(d: u32) -> GldimWitness {
    let mut res = Resolutions::new();
    let mut particular = PolySeries::unit(Flavor::S);
    for bit in 0..32 {
        if d & (1 << bit) != 0 {
            particular = particular.tensor(&res.cinj_gamma(1 << bit));
        }
    }
    GldimWitness {
        d,
        gldim: gldim(d),
        cinj_gamma_len: res.cinj_gamma(d).length().unwrap_or(0),
        cproj_s_len: res.cproj_s(d).length().unwrap_or(0),
        particular_len: particular.length().unwrap_or(0),
        top_ext: top_ext_witness(d),
    }
}

pub fn gldim_check(d_max: u32) -> Report {
    let mut rep = Report::new();
    for d in 1..=d_max {
        let w = gldim_witness(d);
        let bound = (2 * d - 2) as usize;
        rep.record(w.cinj_gamma_len == bound && w.cproj_s_len == bound, || {
            format!("d={d}: resolution lengths {} and {} instead of {bound}", w.cinj_gamma_len, w.cproj_s_len)
        });
        rep.record(w.particular_len == w.gldim as usize, || format!("d={d}: Γ^λ resolution length {} vs {}", w.particular_len, w.gldim));
        if d.is_power_of_two() {
            rep.record(w.top_ext == 1, || format!("d={d}: Ext^{bound}(S^d, Γ^d) witness is {}", w.top_ext));
        }
    }
    rep
}

/// Multi-indices `α ∈ N^v` with `|α| = n`, lexicographic.
fn multi_indices(v: u32, n: u32) -> Vec<Vec<u32>> {
    fn go(v: u32, n: u32, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == 0 {
            if n == 0 {
                out.push(buf.clone());
            }
            return;
        }
        for a in 0..=n {
            buf.push(a);
            go(v - 1, n - a, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(v, n, &mut Vec::new(), &mut out);
    out
}

/// Subsets of `{0..v}` of size `n` as bitmasks, ascending.
fn subsets(v: u32, n: u32) -> Vec<u32> {
    (0u32..1 << v).filter(|m| m.count_ones() == n).collect()
}

/// An evaluated Koszul complex: dimensions, ranks of the maps, homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulComplex {
    pub name: String,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
}

impl KoszulComplex {
    fn from_maps(name: String, dims: Vec<usize>, maps: &[F2Matrix]) -> Self {
        let ranks: Vec<usize> = maps.iter().map(rank).collect();
        let homology = (0..dims.len())
            .map(|i| dims[i] - ranks.get(i).copied().unwrap_or(0) - if i > 0 { ranks[i - 1] } else { 0 })
            .collect();
        KoszulComplex { name, dims, ranks, homology }
    }

    pub fn is_exact(&self) -> bool {
        self.homology.iter().all(|&h| h == 0)
    }
}

/// `Γ^n ⊗ Λ^{d-n}` for `n = d, …, 0` on `F2^v`, with
/// `κ(γ_α ⊗ e_T) = Σ_{i ∉ T, α_i > 0} γ_{α - e_i} ⊗ e_{T ∪ i}`.
pub fn koszul_gamma_lambda(d: u32, v: u32) -> KoszulComplex {
    let bases: Vec<Vec<(Vec<u32>, u32)>> = (0..=d)
        .rev()
        .map(|n| {
            let mut b = Vec::new();
            for a in multi_indices(v, n) {
                for t in subsets(v, d - n) {
                    b.push((a.clone(), t));
                }
            }
            b
        })
        .collect();
    let mut maps = Vec::new();
    for p in 0..bases.len().saturating_sub(1) {
        let idx: HashMap<&(Vec<u32>, u32), usize> = bases[p + 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = F2Matrix::zeros(bases[p + 1].len(), bases[p].len());
        for (j, (a, t)) in bases[p].iter().enumerate() {
            for i in 0..v as usize {
                if a[i] > 0 && t & (1 << i) == 0 {
                    let mut a2 = a.clone();
                    a2[i] -= 1;
                    m.flip(idx[&(a2, t | (1 << i))], j);
                }
            }
        }
        maps.push(m);
    }
    KoszulComplex::from_maps(format!("Γ⊗Λ, d={d}, v={v}"), bases.iter().map(Vec::len).collect(), &maps)
}

/// `Λ^n ⊗ S^{d-n}` for `n = d, …, 0` on `F2^v`, with
/// `κ(e_T ⊗ x^β) = Σ_{i ∈ T} e_{T - i} ⊗ x^{β + e_i}`.
pub fn koszul_lambda_s(d: u32, v: u32) -> KoszulComplex {
    let bases: Vec<Vec<(u32, Vec<u32>)>> = (0..=d)
        .rev()
        .map(|n| {
            let mut b = Vec::new();
            for t in subsets(v, n) {
                for a in multi_indices(v, d - n) {
                    b.push((t, a.clone()));
                }
            }
            b
        })
        .collect();
    let mut maps = Vec::new();
    for p in 0..bases.len().saturating_sub(1) {
        let idx: HashMap<&(u32, Vec<u32>), usize> = bases[p + 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = F2Matrix::zeros(bases[p + 1].len(), bases[p].len());
        for (j, (t, a)) in bases[p].iter().enumerate() {
            for i in 0..v as usize {
                if t & (1 << i) != 0 {
                    let mut a2 = a.clone();
                    a2[i] += 1;
                    m.flip(idx[&(t & !(1 << i), a2)], j);
                }
            }
        }
        maps.push(m);
    }
    KoszulComplex::from_maps(format!("Λ⊗S, d={d}, v={v}"), bases.iter().map(Vec::len).collect(), &maps)
}

/// Both evaluated Koszul complexes, built in parallel.
pub fn koszul_verify(d: u32, v: u32) -> (KoszulComplex, KoszulComplex) {
    std::thread::scope(|sc| {
        let a = sc.spawn(|| koszul_gamma_lambda(d, v));
        let b = sc.spawn(|| koszul_lambda_s(d, v));
        (a.join().expect("koszul worker"), b.join().expect("koszul worker"))
    })
}

pub fn koszul_check(d_max: u32, v_max: u32) -> Report {
    let mut rep = Report::new();
    for d in 1..=d_max {
        for v in 1..=v_max {
            let (a, b) = koszul_verify(d, v);
            for c in [a, b] {
                rep.record(c.is_exact(), || format!("{}: dims {:?}, homology {:?}", c.name, c.dims, c.homology));
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn sorted_is_class() {
        assert_eq!(Composition(vec![1, 3, 2]).sorted(), Composition(vec![3, 2, 1]));
    }
}
