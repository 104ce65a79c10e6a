//! Splitting-principle engine: universal symmetric-function identities in
//! formal Chern roots.
//!
//! A derived bundle (symmetric power, tensor product) has Chern roots that
//! are linear forms in the roots of its inputs. The elementary symmetric
//! polynomials of those derived roots, rewritten in the elementary symmetric
//! polynomials of the input roots, are universal integer formulas for the
//! derived Chern classes; evaluating them at concrete classes is left to
//! the caller.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Integer polynomial in a fixed number of root variables, keyed by
/// exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RootPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigInt>,
}

impl RootPoly {
    fn zero(nvars: usize) -> Self {
        RootPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        RootPoly { nvars, terms }
    }

    /// The linear form `sum of coeff * var` given by `(var, coeff)` pairs.
    fn linear(nvars: usize, parts: &[(usize, u16)]) -> Self {
        let mut terms = BTreeMap::new();
        for (var, coeff) in parts {
            if *coeff == 0 {
                continue;
            }
            let mut exps = vec![0u16; nvars];
            exps[*var] = 1;
            add_term(&mut terms, exps, BigInt::from(*coeff));
        }
        RootPoly { nvars, terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &RootPoly) {
        for (m, c) in &other.terms {
            add_term(&mut self.terms, m.clone(), c.clone());
        }
    }

    fn sub_assign(&mut self, other: &RootPoly) {
        for (m, c) in &other.terms {
            add_term(&mut self.terms, m.clone(), -c);
        }
    }

    fn mul(&self, other: &RootPoly) -> RootPoly {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u16> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                add_term(&mut terms, exps, ca * cb);
            }
        }
        RootPoly {
            nvars: self.nvars,
            terms,
        }
    }

    fn constant_value(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.iter().all(|e| *e == 0) {
                return Some(c.clone());
            }
        }
        None
    }
}

fn add_term(terms: &mut BTreeMap<Vec<u16>, BigInt>, m: Vec<u16>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Elementary symmetric polynomials `e_0..e_up_to` of the given roots,
/// built by convolving the factors `1 + z * root`.
fn elementary_symmetrics(nvars: usize, roots: &[RootPoly], up_to: usize) -> Vec<RootPoly> {
    let mut e: Vec<RootPoly> = Vec::with_capacity(up_to + 1);
    e.push(RootPoly::constant(nvars, 1));
    for _ in 0..up_to {
        e.push(RootPoly::zero(nvars));
    }
    for (t, root) in roots.iter().enumerate() {
        let top = (t + 1).min(up_to);
        for j in (1..=top).rev() {
            let bump = e[j - 1].mul(root);
            e[j].add_assign(&bump);
        }
    }
    e
}

/// Elementary symmetric polynomial `e_i` of the single variable group
/// `vars[offset..offset + len]`.
fn group_elementary(nvars: usize, offset: usize, len: usize, i: usize) -> RootPoly {
    let mut terms = BTreeMap::new();
    // Sum of all squarefree monomials of degree i in the group.
    let mut pick = Vec::new();
    fn rec(
        terms: &mut BTreeMap<Vec<u16>, BigInt>,
        nvars: usize,
        offset: usize,
        len: usize,
        i: usize,
        start: usize,
        pick: &mut Vec<usize>,
    ) {
        if pick.len() == i {
            let mut exps = vec![0u16; nvars];
            for v in pick.iter() {
                exps[offset + v] = 1;
            }
            add_term(terms, exps, BigInt::one());
            return;
        }
        for v in start..len {
            pick.push(v);
            rec(terms, nvars, offset, len, i, v + 1, pick);
            pick.pop();
        }
    }
    rec(&mut terms, nvars, offset, len, i, 0, &mut pick);
    RootPoly { nvars, terms }
}

/// Rewrites `f`, symmetric under permuting `vars[offset..offset + len]`, as
/// a combination of products of the group's elementary symmetric
/// polynomials with cofactors supported away from the group. Keys are the
/// exponent vectors `alpha` of `prod e_i^alpha_i`, `i = 1..=len`.
fn reduce_group(
    mut f: RootPoly,
    offset: usize,
    len: usize,
) -> BTreeMap<Vec<u16>, RootPoly> {
    let nvars = f.nvars;
    let elem: Vec<RootPoly> = (0..=len)
        .map(|i| group_elementary(nvars, offset, len, i))
        .collect();
    let mut out: BTreeMap<Vec<u16>, RootPoly> = BTreeMap::new();
    if len == 0 {
        out.insert(Vec::new(), f);
        return out;
    }
    while !f.is_zero() {
        // Lex-greatest exponent pattern on the group; by symmetry it is
        // weakly decreasing, so it is the leading pattern of a unique
        // product of the group's elementary symmetric polynomials.
        let lead: Vec<u16> = f
            .terms
            .keys()
            .map(|m| m[offset..offset + len].to_vec())
            .max()
            .expect("nonzero polynomial");
        debug_assert!(lead.windows(2).all(|w| w[0] >= w[1]));
        let mut cofactor = RootPoly::zero(nvars);
        for (m, c) in &f.terms {
            if m[offset..offset + len] == lead[..] {
                let mut rest = m.clone();
                rest[offset..offset + len].fill(0);
                add_term(&mut cofactor.terms, rest, c.clone());
            }
        }
        let mut alpha = vec![0u16; len];
        let mut g = RootPoly::constant(nvars, 1);
        for i in 0..len {
            let next = if i + 1 < len { lead[i + 1] } else { 0 };
            alpha[i] = lead[i] - next;
            for _ in 0..alpha[i] {
                g = g.mul(&elem[i + 1]);
            }
        }
        f.sub_assign(&g.mul(&cofactor));
        match out.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(cofactor);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&cofactor);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Exponent vectors `(m_1..m_r)` with the given sum, in stable order.
fn compositions(r: usize, k: u32) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; r];
    fn rec(r: usize, k: u32, slot: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if slot == r {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if slot == r - 1 {
            cur[slot] = k as u16;
            out.push(cur.clone());
            cur[slot] = 0;
            return;
        }
        for v in 0..=k {
            cur[slot] = v as u16;
            rec(r, k - v, slot + 1, cur, out);
        }
        cur[slot] = 0;
    }
    rec(r, k, 0, &mut cur, &mut out);
    out
}

/// Chern classes of the k-th symmetric power of a rank-`r` bundle as
/// universal integer polynomials in `c_1..c_r` of the input. Entry `j` maps
/// exponent vectors `alpha` (meaning `prod c_i^alpha_i`) to coefficients.
pub(crate) fn sym_power_universal(
    r: usize,
    k: u32,
    up_to: usize,
) -> Vec<BTreeMap<Vec<u16>, BigInt>> {
    let roots: Vec<RootPoly> = compositions(r, k)
        .into_iter()
        .map(|m| {
            let parts: Vec<(usize, u16)> =
                m.iter().enumerate().map(|(v, c)| (v, *c)).collect();
            RootPoly::linear(r, &parts)
        })
        .collect();
    let e = elementary_symmetrics(r, &roots, up_to);
    e.into_iter()
        .map(|ej| {
            reduce_group(ej, 0, r)
                .into_iter()
                .map(|(alpha, cof)| {
                    let c = cof
                        .constant_value()
                        .expect("fully symmetric input reduces to constants");
                    (alpha, c)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect()
}

/// Chern classes of the tensor product of bundles of ranks `r` and `s` as
/// universal integer polynomials in the two sets of input Chern classes.
/// Entry `j` maps pairs `(alpha, beta)` (meaning
/// `prod c_i(E)^alpha_i * prod c_i(F)^beta_i`) to coefficients.
pub(crate) type PairKey = (Vec<u16>, Vec<u16>);

pub(crate) fn tensor_universal(
    r: usize,
    s: usize,
    up_to: usize,
) -> Vec<BTreeMap<PairKey, BigInt>> {
    let nvars = r + s;
    let mut roots = Vec::with_capacity(r * s);
    for i in 0..r {
        for j in 0..s {
            roots.push(RootPoly::linear(nvars, &[(i, 1), (r + j, 1)]));
        }
    }
    let e = elementary_symmetrics(nvars, &roots, up_to);
    e.into_iter()
        .map(|ej| {
            let mut map: BTreeMap<PairKey, BigInt> = BTreeMap::new();
            for (alpha, cof) in reduce_group(ej, 0, r) {
                for (beta, rest) in reduce_group(cof, r, s) {
                    let c = rest
                        .constant_value()
                        .expect("fully bisymmetric input reduces to constants");
                    if !c.is_zero() {
                        map.insert((alpha.clone(), beta), c);
                    }
                }
            }
            map
        })
        .collect()
}
