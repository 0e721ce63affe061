//! Chain complexes over a finite degree window, their differential
//! decompositions, kernel- and cokernel-homology with the lambda comparison,
//! and the snake constructions up to the long exact homology sequence.

use crate::diexact::{is_exact_at, is_short_exact, Ses, SesMorphism};
use crate::error::{Error, Result};
use crate::zexact::{
    invert, is_normal_epi, is_normal_map, is_normal_mono, iso_check,
    normal_epi_factorization, ZExact,
};

/// A finite window of composable differentials `d_n: C_n -> C_{n-1}` with
/// implicit zero objects outside `[lo, hi]`.
#[derive(Debug)]
pub struct ChainComplex<C: ZExact> {
    pub lo: i64,
    pub hi: i64,
    objects: Vec<C::Obj>,
    diffs: Vec<C::Mor>,
}

impl<C: ZExact> Clone for ChainComplex<C> {
    fn clone(&self) -> Self {
        ChainComplex {
            lo: self.lo,
            hi: self.hi,
            objects: self.objects.clone(),
            diffs: self.diffs.clone(),
        }
    }
}

impl<C: ZExact> ChainComplex<C> {
    /// `objects[i]` sits in degree `lo + i`; `diffs[i]` is the differential
    /// out of degree `lo + i + 1`.
    pub fn new(cat: &C, lo: i64, objects: Vec<C::Obj>, diffs: Vec<C::Mor>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Validation("empty complex window".into()));
        }
        if diffs.len() + 1 != objects.len() {
            return Err(Error::Validation(
                "a window of n objects needs exactly n - 1 differentials".into(),
            ));
        }
        let hi = lo + objects.len() as i64 - 1;
        for (i, d) in diffs.iter().enumerate() {
            if cat.dom(d) != objects[i + 1] || cat.cod(d) != objects[i] {
                return Err(Error::Validation(format!(
                    "differential {i} does not match the adjacent objects"
                )));
            }
        }
        for w in diffs.windows(2) {
            let dd = cat.compose(&w[0], &w[1])?;
            let zero = cat.zero_mor(&cat.dom(&w[1]), &cat.cod(&w[0]));
            if !cat.eq_mor(&dd, &zero) {
                return Err(Error::Validation("d . d != 0".into()));
            }
        }
        Ok(ChainComplex { lo, hi, objects, diffs })
    }

    pub fn object(&self, cat: &C, n: i64) -> C::Obj {
        if n < self.lo || n > self.hi {
            cat.zero_object()
        } else {
            self.objects[(n - self.lo) as usize].clone()
        }
    }

    /// `d_n: C_n -> C_{n-1}`, a zero morphism outside the stored range.
    pub fn diff(&self, cat: &C, n: i64) -> C::Mor {
        if n > self.lo && n <= self.hi {
            self.diffs[(n - 1 - self.lo) as usize].clone()
        } else {
            cat.zero_mor(&self.object(cat, n), &self.object(cat, n - 1))
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// The same complex with the window widened to `[lo, hi]`, the implicit
    /// zero objects materialized.
    pub fn padded(&self, cat: &C, lo: i64, hi: i64) -> ChainComplex<C> {
        assert!(lo <= self.lo && hi >= self.hi);
        let objects = (lo..=hi).map(|n| self.object(cat, n)).collect();
        let diffs = ((lo + 1)..=hi).map(|n| self.diff(cat, n)).collect();
        ChainComplex { lo, hi, objects, diffs }
    }
}

/// The per-degree decomposition data of a differential: kernels,
/// cokernels, and
/// the three induced maps.
#[derive(Debug)]
pub struct Decomposition<C: ZExact> {
    pub lo: i64,
    pub hi: i64,
    /// k[n] = ker(d_n): K(d_n) -> C_n
    kernels: Vec<C::Mor>,
    /// q[n] = coker(d_{n+1}): C_n -> Q(d_{n+1})
    cokernels: Vec<C::Mor>,
    /// d_low[n]: C_n -> K(d_{n-1}),   d_n = k_{n-1} . d_low_n
    d_low: Vec<C::Mor>,
    /// d_bar[n]: Q(d_{n+1}) -> C_{n-1},   d_n = d_bar_n . q_n
    d_bar: Vec<C::Mor>,
    /// d_hat[n]: Q(d_{n+1}) -> K(d_{n-1}), the unique diagonal filler
    d_hat: Vec<C::Mor>,
}

impl<C: ZExact> Decomposition<C> {
    fn kq_slot(&self, n: i64) -> usize {
        assert!(n >= self.lo - 2 && n <= self.hi + 2, "degree {n} outside decomposition");
        (n - (self.lo - 2)) as usize
    }

    fn d_slot(&self, n: i64) -> usize {
        assert!(n >= self.lo - 1 && n <= self.hi + 2, "degree {n} outside decomposition");
        (n - (self.lo - 1)) as usize
    }

    pub fn kernel(&self, n: i64) -> &C::Mor {
        &self.kernels[self.kq_slot(n)]
    }

    pub fn cokernel(&self, n: i64) -> &C::Mor {
        &self.cokernels[self.kq_slot(n)]
    }

    pub fn d_low(&self, n: i64) -> &C::Mor {
        &self.d_low[self.d_slot(n)]
    }

    pub fn d_bar(&self, n: i64) -> &C::Mor {
        &self.d_bar[self.d_slot(n)]
    }

    pub fn d_hat(&self, n: i64) -> &C::Mor {
        &self.d_hat[self.d_slot(n)]
    }
}

/// Compute the decomposition data over a padded window: kernels and
/// cokernels for `lo - 2 ..= hi + 2`, induced maps for `lo - 1 ..= hi + 2`.
pub fn decompose<C: ZExact>(cat: &C, cx: &ChainComplex<C>) -> Result<Decomposition<C>> {
    let lo = cx.lo;
    let hi = cx.hi;
    let mut kernels = Vec::new();
    let mut cokernels = Vec::new();
    let mut d_low = Vec::new();
    let mut d_bar = Vec::new();
    let mut d_hat = Vec::new();
    for n in (lo - 2)..=(hi + 2) {
        kernels.push(cat.kernel(&cx.diff(cat, n)));
        cokernels.push(cat.cokernel(&cx.diff(cat, n + 1)));
    }
    let kq_slot = |n: i64| (n - (lo - 2)) as usize;
    for n in (lo - 1)..=(hi + 2) {
        let d = cx.diff(cat, n);
        let low = cat
            .lift_through_mono(&kernels[kq_slot(n - 1)], &d)
            .ok_or_else(|| Error::Internal("d does not lift through ker(d)".into()))?;
        let bar = cat
            .descend_along_epi(&cokernels[kq_slot(n)], &d)
            .ok_or_else(|| Error::Internal("d does not descend along coker(d)".into()))?;
        // the diagonal filler, computed one way and checked the other
        let hat = {
            let h = cat
                .lift_through_mono(&kernels[kq_slot(n - 1)], &bar)
                .ok_or_else(|| Error::Internal("d_bar does not lift through ker(d)".into()))?;
            let other = cat
                .descend_along_epi(&cokernels[kq_slot(n)], &low)
                .ok_or_else(|| Error::Internal("d_low does not descend".into()))?;
            if !cat.eq_mor(&h, &other) {
                return Err(Error::Internal("diagonal fillers disagree".into()));
            }
            h
        };
        d_low.push(low);
        d_bar.push(bar);
        d_hat.push(hat);
    }
    Ok(Decomposition { lo, hi, kernels, cokernels, d_low, d_bar, d_hat })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ComplexClass {
    Normal,
    Subnormal,
    Cosubnormal,
    WeaklyNormal,
    None,
}

impl std::fmt::Display for ComplexClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ComplexClass::Normal => "normal",
            ComplexClass::Subnormal => "subnormal",
            ComplexClass::Cosubnormal => "cosubnormal",
            ComplexClass::WeaklyNormal => "weakly-normal",
            ComplexClass::None => "none",
        };
        f.write_str(s)
    }
}

/// Classify by the strongest normality property of the differentials
/// aggregating over every degree of the window.
pub fn classify<C: ZExact>(cat: &C, cx: &ChainComplex<C>) -> Result<ComplexClass> {
    let dec = decompose(cat, cx)?;
    let range = || cx.lo..=(cx.hi + 1);
    let all_normal = range().all(|n| is_normal_map(cat, &cx.diff(cat, n)));
    if all_normal {
        return Ok(ComplexClass::Normal);
    }
    if range().all(|n| is_normal_map(cat, dec.d_low(n))) {
        return Ok(ComplexClass::Subnormal);
    }
    if range().all(|n| is_normal_map(cat, dec.d_bar(n))) {
        return Ok(ComplexClass::Cosubnormal);
    }
    if range().all(|n| is_normal_map(cat, dec.d_hat(n))) {
        return Ok(ComplexClass::WeaklyNormal);
    }
    Ok(ComplexClass::None)
}

fn require_weakly_normal<C: ZExact>(cat: &C, cx: &ChainComplex<C>, dec: &Decomposition<C>)
    -> Result<()> {
    for n in cx.lo..=(cx.hi + 1) {
        if !is_normal_map(cat, dec.d_hat(n)) {
            return Err(Error::Precondition(format!(
                "complex is not weakly normal: d_hat at degree {n} is not a normal map"
            )));
        }
    }
    Ok(())
}

/// Cokernel homology `H^c_n = Q(d_hat_{n+1})` with its projection from
/// `K(d_n)`, and kernel homology `H^k_n = K(d_hat_n)` with its inclusion
/// into `Q(d_{n+1})`.
pub struct HomologyAt<C: ZExact> {
    pub object: C::Obj,
    /// for H^c: the projection K(d_n) ->> H^c_n;
    /// for H^k: the inclusion H^k_n >-> Q(d_{n+1})
    pub structure_map: C::Mor,
}

pub fn homology_c<C: ZExact>(cat: &C, cx: &ChainComplex<C>, dec: &Decomposition<C>, n: i64)
    -> Result<HomologyAt<C>> {
    require_weakly_normal(cat, cx, dec)?;
    let proj = cat.cokernel(dec.d_hat(n + 1));
    Ok(HomologyAt { object: cat.cod(&proj), structure_map: proj })
}

pub fn homology_k<C: ZExact>(cat: &C, cx: &ChainComplex<C>, dec: &Decomposition<C>, n: i64)
    -> Result<HomologyAt<C>> {
    require_weakly_normal(cat, cx, dec)?;
    let incl = cat.kernel(dec.d_hat(n));
    Ok(HomologyAt { object: cat.dom(&incl), structure_map: incl })
}

/// The comparison `lambda_n: H^c_n -> H^k_n`, constructed by
/// descending and lifting the composite `q_n . k_n`.
pub fn lambda<C: ZExact>(cat: &C, cx: &ChainComplex<C>, dec: &Decomposition<C>, n: i64)
    -> Result<C::Mor> {
    require_weakly_normal(cat, cx, dec)?;
    let hc = homology_c(cat, cx, dec, n)?;
    let hk = homology_k(cat, cx, dec, n)?;
    let phi = cat.compose(dec.cokernel(n), dec.kernel(n))?;
    let psi = cat
        .descend_along_epi(&hc.structure_map, &phi)
        .ok_or_else(|| Error::Internal("q_n . k_n does not descend to H^c".into()))?;
    let lam = cat
        .lift_through_mono(&hk.structure_map, &psi)
        .ok_or_else(|| Error::Internal("comparison does not land in H^k".into()))?;
    Ok(lam)
}

/// Six objects and five maps; the spine of the snake output.
#[derive(Debug)]
pub struct SixTermSequence<C: ZExact> {
    pub objects: [C::Obj; 6],
    pub maps: [C::Mor; 5],
    /// index of the connecting morphism inside `maps`
    pub connecting: usize,
}

impl<C: ZExact> Clone for SixTermSequence<C> {
    fn clone(&self) -> Self {
        SixTermSequence {
            objects: self.objects.clone(),
            maps: self.maps.clone(),
            connecting: self.connecting,
        }
    }
}

impl<C: ZExact> SixTermSequence<C> {
    /// Exactness at the four interior nodes.
    pub fn verify_interior(&self, cat: &C) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !is_exact_at(cat, &w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Zero-capped exactness: the first map is monic with trivial kernel
    /// and the last map is a normal epi.
    pub fn verify_caps(&self, cat: &C) -> Result<bool> {
        let first = &self.maps[0];
        let zero_in = cat.zero_mor(&cat.zero_object(), &cat.dom(first));
        let last = &self.maps[4];
        let zero_out = cat.zero_mor(&cat.cod(last), &cat.zero_object());
        Ok(is_exact_at(cat, &zero_in, first)? && is_exact_at(cat, last, &zero_out)?)
    }
}

/// Pure Snake Lemma (2.2.1): for an identity-middle morphism of short exact
/// sequences, the connecting comparison `Q(kappa) -> K(rho)` is an
/// isomorphism, and `0 -> K -> L -> Q -> R -> 0` is exact.
pub struct PureSnake<C: ZExact> {
    pub connecting: C::Mor,
    /// kappa, t = q . l, rho
    pub sequence: [C::Mor; 3],
}

pub fn pure_snake<C: ZExact>(cat: &C, m: &SesMorphism<C>) -> Result<PureSnake<C>> {
    if !cat.eq_mor(&m.xi, &cat.identity(&cat.dom(&m.xi))) {
        return Err(Error::Precondition("pure snake needs an identity middle map".into()));
    }
    if !is_short_exact(cat, &m.top.k, &m.top.q) || !is_short_exact(cat, &m.bottom.k, &m.bottom.q)
    {
        return Err(Error::Precondition("pure snake rows must be short exact".into()));
    }
    let t = cat.compose(&m.top.q, &m.bottom.k)?;
    let coker_kappa = cat.cokernel(&m.kappa);
    let tbar = cat
        .descend_along_epi(&coker_kappa, &t)
        .ok_or_else(|| Error::Internal("t does not descend along coker(kappa)".into()))?;
    let ker_rho = cat.kernel(&m.rho);
    let connecting = cat
        .lift_through_mono(&ker_rho, &tbar)
        .ok_or_else(|| Error::Internal("t does not land in ker(rho)".into()))?;
    if !iso_check(cat, &connecting) {
        return Err(Error::Precondition(
            "pure snake comparison is not an isomorphism on this instance".into(),
        ));
    }
    Ok(PureSnake { connecting, sequence: [m.kappa.clone(), t, m.rho.clone()] })
}

/// Quotient-object comparison `Q(f) -> Q(g)` for two epis out of the same
/// object presenting the same quotient; must be invertible.
fn quotient_iso<C: ZExact>(cat: &C, e1: &C::Mor, e2: &C::Mor) -> Result<C::Mor> {
    let fwd = cat
        .descend_along_epi(e1, e2)
        .ok_or_else(|| Error::Internal("quotient comparison missing".into()))?;
    cat.descend_along_epi(e2, e1)
        .ok_or_else(|| Error::Internal("quotient comparison not invertible".into()))?;
    Ok(fwd)
}

/// Subobject comparison `dom(m1) -> dom(m2)` for two monos presenting the
/// same subobject; must be invertible.
fn subobject_iso<C: ZExact>(cat: &C, m1: &C::Mor, m2: &C::Mor) -> Result<C::Mor> {
    let fwd = cat
        .lift_through_mono(m2, m1)
        .ok_or_else(|| Error::Internal("subobject comparison missing".into()))?;
    cat.lift_through_mono(m1, m2)
        .ok_or_else(|| Error::Internal("subobject comparison not invertible".into()))?;
    Ok(fwd)
}

/// The classical snake lemma. The connecting morphism is assembled
/// from the three pure-snake isomorphisms of the proof, each realized as an
/// explicit comparison map.
pub fn snake<C: ZExact>(cat: &C, m: &SesMorphism<C>) -> Result<SixTermSequence<C>> {
    for (name, v) in [("kappa", &m.kappa), ("xi", &m.xi), ("rho", &m.rho)] {
        if !is_normal_map(cat, v) {
            return Err(Error::NonNormalVertical { which: name.into() });
        }
    }
    let k = &m.top.k;
    let q = &m.top.q;
    let l = &m.bottom.k;
    let r = &m.bottom.q;

    let ker_kappa = cat.kernel(&m.kappa);
    let ker_xi = cat.kernel(&m.xi);
    let ker_rho = cat.kernel(&m.rho);
    let coker_kappa = cat.cokernel(&m.kappa);
    let coker_xi = cat.cokernel(&m.xi);
    let coker_rho = cat.cokernel(&m.rho);

    let k_star = cat
        .lift_through_mono(&ker_xi, &cat.compose(k, &ker_kappa)?)
        .ok_or_else(|| Error::Internal("k* missing".into()))?;
    let q_star = cat
        .lift_through_mono(&ker_rho, &cat.compose(q, &ker_xi)?)
        .ok_or_else(|| Error::Internal("q* missing".into()))?;
    let l_star = cat
        .descend_along_epi(&coker_kappa, &cat.compose(&coker_xi, l)?)
        .ok_or_else(|| Error::Internal("l* missing".into()))?;
    let r_star = cat
        .descend_along_epi(&coker_xi, &cat.compose(&coker_rho, r)?)
        .ok_or_else(|| Error::Internal("r* missing".into()))?;

    // Normal factorizations of the verticals.
    let fac_xi = normal_epi_factorization(cat, &m.xi);
    let (e_xi, v_xi) = (fac_xi.first, fac_xi.second);
    let fac_kappa = normal_epi_factorization(cat, &m.kappa);
    let v_kappa = fac_kappa.second;
    let fac_rho = normal_epi_factorization(cat, &m.rho);
    let (e_rho, v_rho) = (fac_rho.first, fac_rho.second);
    for (name, v) in [("xi", &v_xi), ("kappa", &v_kappa), ("rho", &v_rho)] {
        if !is_normal_mono(cat, v)? {
            return Err(Error::NonNormalVertical { which: name.into() });
        }
    }

    // Step 1: pushout of e_xi along q, two short exact sequences on Q.
    let (z, f_s) = crate::zexact::pushout_normal_epi(cat, q, &e_xi)?;
    let tau = cat
        .descend_along_epi(&z, &e_rho)
        .ok_or_else(|| Error::Internal("tau missing".into()))?;
    let m_j = cat.kernel(&z);
    let ker_e_rho = cat.kernel(&e_rho);
    let c_a = subobject_iso(cat, &ker_rho, &ker_e_rho)?;
    let a_v = cat
        .lift_through_mono(&ker_e_rho, &m_j)
        .ok_or_else(|| Error::Internal("step 1 vertical missing".into()))?;
    let step1 = SesMorphism {
        top: Ses { k: m_j.clone(), q: z.clone() },
        bottom: Ses { k: ker_e_rho.clone(), q: e_rho.clone() },
        kappa: a_v.clone(),
        xi: cat.identity(&cat.cod(q)),
        rho: tau.clone(),
    };
    let d1 = pure_snake(cat, &step1)?;

    // comparison Q(q*) ~ Q(a_v)
    let coker_q_star = cat.cokernel(&q_star);
    let coker_a_v = cat.cokernel(&a_v);
    let c1 = {
        let via = cat.compose(&coker_a_v, &c_a)?;
        let fwd = cat
            .descend_along_epi(&coker_q_star, &via)
            .ok_or_else(|| Error::Internal("c1 comparison missing".into()))?;
        let back_via = cat.compose(&coker_q_star, &invert(cat, &c_a)?)?;
        cat.descend_along_epi(&coker_a_v, &back_via)
            .ok_or_else(|| Error::Internal("c1 comparison not invertible".into()))?;
        fwd
    };

    // Step 2 (dual): pullback of v_xi along l, two short exact sequences
    // on L.
    let (t_l, t_i) = crate::zexact::pullback_normal_mono(cat, l, &v_xi)?;
    if !is_normal_mono(cat, &t_i)? {
        return Err(Error::Precondition(
            "pullback leg into the image is not a normal mono on this instance".into(),
        ));
    }
    let m_t = cat
        .lift_through_mono(&t_l, &v_kappa)
        .ok_or_else(|| Error::Internal("step 2 vertical missing".into()))?;
    let coker_v_kappa = cat.cokernel(&v_kappa);
    let coker_t_l = cat.cokernel(&t_l);
    let rho_v2 = cat
        .descend_along_epi(&coker_v_kappa, &coker_t_l)
        .ok_or_else(|| Error::Internal("step 2 right vertical missing".into()))?;
    let step2 = SesMorphism {
        top: Ses { k: v_kappa.clone(), q: coker_v_kappa.clone() },
        bottom: Ses { k: t_l.clone(), q: coker_t_l.clone() },
        kappa: m_t.clone(),
        xi: cat.identity(&cat.dom(&coker_v_kappa)),
        rho: rho_v2.clone(),
    };
    let d2 = pure_snake(cat, &step2)?;

    // comparison K(l*) ~ K(rho_v2), through Q(kappa) ~ Q(v_kappa)
    let c2 = quotient_iso(cat, &coker_kappa, &coker_v_kappa)?;
    let ker_l_star = cat.kernel(&l_star);
    let ker_rho_v2 = cat.kernel(&rho_v2);
    let c4 = {
        let via = cat.compose(&c2, &ker_l_star)?;
        let fwd = cat
            .lift_through_mono(&ker_rho_v2, &via)
            .ok_or_else(|| Error::Internal("c4 comparison missing".into()))?;
        let back_via = cat.compose(&invert(cat, &c2)?, &ker_rho_v2)?;
        cat.lift_through_mono(&ker_l_star, &back_via)
            .ok_or_else(|| Error::Internal("c4 comparison not invertible".into()))?;
        fwd
    };

    // Step 3: two short exact sequences on the image I(xi).
    let g_hat = cat.compose(&t_i, &m_t)?;
    if !is_short_exact(cat, &g_hat, &f_s) {
        return Err(Error::Precondition(
            "image row is not short exact on this instance".into(),
        ));
    }
    let x_prime = cat.cokernel(&t_i);
    let rho_v3 = cat
        .descend_along_epi(&f_s, &x_prime)
        .ok_or_else(|| Error::Internal("step 3 right vertical missing".into()))?;
    let step3 = SesMorphism {
        top: Ses { k: g_hat, q: f_s.clone() },
        bottom: Ses { k: t_i.clone(), q: x_prime.clone() },
        kappa: m_t.clone(),
        xi: cat.identity(&cat.dom(&f_s)),
        rho: rho_v3.clone(),
    };
    let d3 = pure_snake(cat, &step3)?;

    // comparison K(tau) ~ K(rho_v3): equal subobjects of S
    let ker_tau = cat.kernel(&tau);
    let ker_rho_v3 = cat.kernel(&rho_v3);
    let c3 = subobject_iso(cat, &ker_tau, &ker_rho_v3)?;

    // Assembly: Q(q*) -> K(l*) through the three pure-snake isomorphisms.
    let core = {
        let s1 = cat.compose(&d1.connecting, &c1)?; // Q(q*) -> K(tau)
        let s2 = cat.compose(&c3, &s1)?; // -> K(rho_v3)
        let s3 = cat.compose(&invert(cat, &d3.connecting)?, &s2)?; // -> Q(m_t)
        let s4 = cat.compose(&d2.connecting, &s3)?; // -> K(rho_v2)
        cat.compose(&invert(cat, &c4)?, &s4)? // -> K(l*)
    };
    let connecting = cat.compose(&ker_l_star, &cat.compose(&core, &coker_q_star)?)?;

    let objects = [
        cat.dom(&ker_kappa),
        cat.dom(&ker_xi),
        cat.dom(&ker_rho),
        cat.cod(&coker_kappa),
        cat.cod(&coker_xi),
        cat.cod(&coker_rho),
    ];
    let six = SixTermSequence {
        objects,
        maps: [k_star, q_star, connecting, l_star, r_star],
        connecting: 2,
    };
    if !six.verify_interior(cat)? || !six.verify_caps(cat)? {
        return Err(Error::Internal("snake sequence failed exactness verification".into()));
    }
    Ok(six)
}

/// Input shape of the relaxed snake lemma: top row exact with
/// epic tail, bottom row coexact with monic head, five normal maps.
pub struct RelaxedSnakeInput<C: ZExact> {
    pub top_k: C::Mor,
    pub top_q: C::Mor,
    pub bottom_l: C::Mor,
    pub bottom_r: C::Mor,
    pub kappa: C::Mor,
    pub xi: C::Mor,
    pub rho: C::Mor,
}

pub fn relaxed_snake<C: ZExact>(cat: &C, input: &RelaxedSnakeInput<C>)
    -> Result<SixTermSequence<C>> {
    let RelaxedSnakeInput { top_k: k, top_q: q, bottom_l: l, bottom_r: r, kappa, xi, rho } =
        input;
    for (name, f) in
        [("k", k), ("kappa", kappa), ("xi", xi), ("rho", rho), ("r", r)]
    {
        if !is_normal_map(cat, f) {
            return Err(Error::NonNormalVertical { which: name.into() });
        }
    }
    let lhs = cat.compose(l, kappa)?;
    let rhs = cat.compose(xi, k)?;
    if !cat.eq_mor(&lhs, &rhs) {
        return Err(Error::Precondition("left square does not commute".into()));
    }
    let lhs = cat.compose(r, xi)?;
    let rhs = cat.compose(rho, q)?;
    if !cat.eq_mor(&lhs, &rhs) {
        return Err(Error::Precondition("right square does not commute".into()));
    }
    if !is_exact_at(cat, k, q)? || !is_normal_epi(cat, q) {
        return Err(Error::Precondition("top row is not exact with epic tail".into()));
    }
    if !is_normal_mono(cat, l)? {
        return Err(Error::Precondition("bottom row head is not a normal mono".into()));
    }
    let r_prime = cat.cokernel(l);
    let v = cat
        .descend_along_epi(&r_prime, r)
        .ok_or_else(|| Error::Precondition("bottom row is not coexact".into()))?;
    if !cat.is_mono(&v) {
        return Err(Error::Precondition("bottom row is not coexact".into()));
    }

    // Reduce to the classical snake over (kappa', xi, rho').
    let k_prime = cat.kernel(q);
    let u = cat
        .lift_through_mono(&k_prime, k)
        .ok_or_else(|| Error::Internal("k does not land in ker(q)".into()))?;
    if !cat.is_epi(&u) {
        return Err(Error::Precondition("top row exactness does not make u epic".into()));
    }
    let kappa_prime = cat
        .lift_through_mono(l, &cat.compose(xi, &k_prime)?)
        .ok_or_else(|| Error::Internal("kappa' missing".into()))?;
    let rho_prime = cat
        .descend_along_epi(q, &cat.compose(&r_prime, xi)?)
        .ok_or_else(|| Error::Internal("rho' missing".into()))?;
    let glued_kappa = cat.compose(&kappa_prime, &u)?;
    if !cat.eq_mor(&glued_kappa, kappa) {
        return Err(Error::Internal("kappa does not factor as kappa' . u".into()));
    }
    let glued_rho = cat.compose(&v, &rho_prime)?;
    if !cat.eq_mor(&glued_rho, rho) {
        return Err(Error::Internal("rho does not factor as v . rho'".into()));
    }
    let msm = SesMorphism::new(
        cat,
        Ses { k: k_prime.clone(), q: q.clone() },
        Ses { k: l.clone(), q: r_prime.clone() },
        kappa_prime,
        xi.clone(),
        rho_prime,
    )?;
    let inner = snake(cat, &msm)?;

    // Re-express the ends through K(rho) and Q(kappa).
    let ker_rho = cat.kernel(rho);
    let ker_rho_prime = cat.kernel(&msm.rho);
    let i_r = subobject_iso(cat, &ker_rho, &ker_rho_prime)?;
    let coker_kappa = cat.cokernel(kappa);
    let coker_kappa_prime = cat.cokernel(&msm.kappa);
    let j_q = quotient_iso(cat, &coker_kappa, &coker_kappa_prime)?;

    let ker_kappa = cat.kernel(kappa);
    let ker_xi = cat.kernel(xi);
    let coker_xi = cat.cokernel(xi);
    let coker_rho = cat.cokernel(rho);
    let k_star = cat
        .lift_through_mono(&ker_xi, &cat.compose(k, &ker_kappa)?)
        .ok_or_else(|| Error::Internal("k* missing".into()))?;
    let q_star = cat
        .lift_through_mono(&ker_rho, &cat.compose(q, &ker_xi)?)
        .ok_or_else(|| Error::Internal("q* missing".into()))?;
    let l_star = cat
        .descend_along_epi(&coker_kappa, &cat.compose(&coker_xi, l)?)
        .ok_or_else(|| Error::Internal("l* missing".into()))?;
    let r_star = cat
        .descend_along_epi(&coker_xi, &cat.compose(&coker_rho, r)?)
        .ok_or_else(|| Error::Internal("r* missing".into()))?;
    let connecting = {
        let inner_conn = &inner.maps[2];
        let step = cat.compose(inner_conn, &i_r)?; // K(rho) -> Q(kappa')
        cat.compose(&invert(cat, &j_q)?, &step)? // -> Q(kappa)
    };
    let objects = [
        cat.dom(&ker_kappa),
        cat.dom(&ker_xi),
        cat.dom(&ker_rho),
        cat.cod(&coker_kappa),
        cat.cod(&coker_xi),
        cat.cod(&coker_rho),
    ];
    let six = SixTermSequence {
        objects,
        maps: [k_star, q_star, connecting, l_star, r_star],
        connecting: 2,
    };
    if !six.verify_interior(cat)? {
        return Err(Error::Internal(
            "relaxed snake failed interior exactness verification".into(),
        ));
    }
    Ok(six)
}

/// The six-term exact sequence of a composite of normal maps.
pub fn six_term_from_composite<C: ZExact>(cat: &C, f: &C::Mor, g: &C::Mor)
    -> Result<SixTermSequence<C>> {
    if cat.cod(f) != cat.dom(g) {
        return Err(Error::ComposeMismatch);
    }
    let gf = cat.compose(g, f)?;
    for (name, h) in [("f", f), ("g", g), ("g.f", &gf)] {
        if !is_normal_map(cat, h) {
            return Err(Error::NonNormalVertical { which: name.into() });
        }
    }
    let ker_f = cat.kernel(f);
    let ker_gf = cat.kernel(&gf);
    let ker_g = cat.kernel(g);
    let coker_f = cat.cokernel(f);
    let coker_gf = cat.cokernel(&gf);
    let coker_g = cat.cokernel(g);
    let u = cat
        .lift_through_mono(&ker_gf, &ker_f)
        .ok_or_else(|| Error::Internal("K(f) -> K(gf) missing".into()))?;
    let f_tilde = cat
        .lift_through_mono(&ker_g, &cat.compose(f, &ker_gf)?)
        .ok_or_else(|| Error::Internal("K(gf) -> K(g) missing".into()))?;
    let mid = cat.compose(&coker_f, &ker_g)?;
    let v = cat
        .descend_along_epi(&coker_f, &cat.compose(&coker_gf, g)?)
        .ok_or_else(|| Error::Internal("Q(f) -> Q(gf) missing".into()))?;
    let g_tilde = cat
        .descend_along_epi(&coker_gf, &coker_g)
        .ok_or_else(|| Error::Internal("Q(gf) -> Q(g) missing".into()))?;
    let objects = [
        cat.dom(&ker_f),
        cat.dom(&ker_gf),
        cat.dom(&ker_g),
        cat.cod(&coker_f),
        cat.cod(&coker_gf),
        cat.cod(&coker_g),
    ];
    let six = SixTermSequence {
        objects,
        maps: [u, f_tilde, mid, v, g_tilde],
        connecting: 2,
    };
    if !six.verify_interior(cat)? {
        return Err(Error::Internal(
            "composite six-term sequence failed exactness verification".into(),
        ));
    }
    Ok(six)
}

/// The map induced on cokernel homology by a degreewise morphism of
/// complexes.
pub fn induced_on_hc<C: ZExact>(
    cat: &C,
    dec_from: &Decomposition<C>,
    dec_to: &Decomposition<C>,
    map_at: &dyn Fn(i64) -> C::Mor,
    n: i64,
) -> Result<C::Mor> {
    let k_map = cat
        .lift_through_mono(
            dec_to.kernel(n),
            &cat.compose(&map_at(n), dec_from.kernel(n))?,
        )
        .ok_or_else(|| Error::Internal("induced kernel map missing".into()))?;
    let proj_from = cat.cokernel(dec_from.d_hat(n + 1));
    let proj_to = cat.cokernel(dec_to.d_hat(n + 1));
    cat.descend_along_epi(&proj_from, &cat.compose(&proj_to, &k_map)?)
        .ok_or_else(|| Error::Internal("induced cokernel-homology map missing".into()))
}

/// The map induced on kernel homology.
pub fn induced_on_hk<C: ZExact>(
    cat: &C,
    dec_from: &Decomposition<C>,
    dec_to: &Decomposition<C>,
    map_at: &dyn Fn(i64) -> C::Mor,
    n: i64,
) -> Result<C::Mor> {
    let q_map = cat
        .descend_along_epi(
            dec_from.cokernel(n),
            &cat.compose(dec_to.cokernel(n), &map_at(n))?,
        )
        .ok_or_else(|| Error::Internal("induced quotient map missing".into()))?;
    let incl_from = cat.kernel(dec_from.d_hat(n));
    let incl_to = cat.kernel(dec_to.d_hat(n));
    cat.lift_through_mono(&incl_to, &cat.compose(&q_map, &incl_from)?)
        .ok_or_else(|| Error::Internal("induced kernel-homology map missing".into()))
}

/// A degreewise short exact sequence of chain complexes.
pub struct ComplexSes<C: ZExact> {
    pub a: ChainComplex<C>,
    pub b: ChainComplex<C>,
    pub c: ChainComplex<C>,
    /// degreewise monos a_n: A_n -> B_n over the combined window
    pub f: Vec<C::Mor>,
    /// degreewise epis g_n: B_n -> C_n
    pub g: Vec<C::Mor>,
    pub lo: i64,
}

impl<C: ZExact> ComplexSes<C> {
    pub fn new(
        cat: &C,
        a: ChainComplex<C>,
        b: ChainComplex<C>,
        c: ChainComplex<C>,
        f: Vec<C::Mor>,
        g: Vec<C::Mor>,
        lo: i64,
    ) -> Result<Self> {
        let hi = lo + f.len() as i64 - 1;
        if g.len() != f.len() {
            return Err(Error::Validation("f and g must cover the same degrees".into()));
        }
        let this = ComplexSes { a, b, c, f, g, lo };
        for n in lo..=hi {
            let fun = this.f_at(cat, n);
            let gn = this.g_at(cat, n);
            if !is_short_exact(cat, &fun, &gn) {
                return Err(Error::Validation(format!("degree {n} is not short exact")));
            }
            // chain morphism squares
            if n > lo {
                let lhs = cat.compose(&this.f_at(cat, n - 1), &this.a.diff(cat, n))?;
                let rhs = cat.compose(&this.b.diff(cat, n), &this.f_at(cat, n))?;
                if !cat.eq_mor(&lhs, &rhs) {
                    return Err(Error::Validation(format!("f square at degree {n}")));
                }
                let lhs = cat.compose(&this.g_at(cat, n - 1), &this.b.diff(cat, n))?;
                let rhs = cat.compose(&this.c.diff(cat, n), &this.g_at(cat, n))?;
                if !cat.eq_mor(&lhs, &rhs) {
                    return Err(Error::Validation(format!("g square at degree {n}")));
                }
            }
        }
        Ok(this)
    }

    pub fn f_at(&self, cat: &C, n: i64) -> C::Mor {
        let hi = self.lo + self.f.len() as i64 - 1;
        if n < self.lo || n > hi {
            cat.zero_mor(&self.a.object(cat, n), &self.b.object(cat, n))
        } else {
            self.f[(n - self.lo) as usize].clone()
        }
    }

    pub fn g_at(&self, cat: &C, n: i64) -> C::Mor {
        let hi = self.lo + self.g.len() as i64 - 1;
        if n < self.lo || n > hi {
            cat.zero_mor(&self.b.object(cat, n), &self.c.object(cat, n))
        } else {
            self.g[(n - self.lo) as usize].clone()
        }
    }
}

/// One node of the long exact homology sequence.
pub struct LesNode<C: ZExact> {
    pub complex: char,
    pub degree: i64,
    pub object: C::Obj,
}

pub struct LongExactSequence<C: ZExact> {
    pub nodes: Vec<LesNode<C>>,
    pub maps: Vec<C::Mor>,
}

/// The long exact homology sequence of a short exact sequence
/// of normal complexes, with connecting maps built through the relaxed
/// snake and the lambda identifications.
pub fn long_exact_sequence<C: ZExact>(cat: &C, ses: &ComplexSes<C>)
    -> Result<LongExactSequence<C>> {
    for (name, cx) in [('A', &ses.a), ('B', &ses.b), ('C', &ses.c)] {
        if classify(cat, cx)? != ComplexClass::Normal {
            return Err(Error::Precondition(format!("complex {name} is not normal")));
        }
    }
    let lo = ses.a.lo.min(ses.b.lo).min(ses.c.lo);
    let hi = ses.a.hi.max(ses.b.hi).max(ses.c.hi);
    let a = ses.a.padded(cat, lo, hi);
    let b = ses.b.padded(cat, lo, hi);
    let c = ses.c.padded(cat, lo, hi);
    let dec_a = decompose(cat, &a)?;
    let dec_b = decompose(cat, &b)?;
    let dec_c = decompose(cat, &c)?;

    let mut nodes: Vec<LesNode<C>> = Vec::new();
    let mut maps: Vec<C::Mor> = Vec::new();
    // walk degrees from hi down to lo: ... H_n(A) H_n(B) H_n(C) H_{n-1}(A)...
    for n in (lo..=hi).rev() {
        let f_at = |m: i64| ses.f_at(cat, m);
        let g_at = |m: i64| ses.g_at(cat, m);
        let hc_a = homology_c(cat, &a, &dec_a, n)?;
        let hc_b = homology_c(cat, &b, &dec_b, n)?;
        let hc_c = homology_c(cat, &c, &dec_c, n)?;
        if nodes.is_empty() {
            nodes.push(LesNode { complex: 'A', degree: n, object: hc_a.object.clone() });
        }
        maps.push(induced_on_hc(cat, &dec_a, &dec_b, &f_at, n)?);
        nodes.push(LesNode { complex: 'B', degree: n, object: hc_b.object.clone() });
        maps.push(induced_on_hc(cat, &dec_b, &dec_c, &g_at, n)?);
        nodes.push(LesNode { complex: 'C', degree: n, object: hc_c.object.clone() });
        // connecting: H_n(C) -> H_{n-1}(A) via lambda and the relaxed snake
        let top_k = cat
            .descend_along_epi(
                dec_a.cokernel(n),
                &cat.compose(dec_b.cokernel(n), &f_at(n))?,
            )
            .ok_or_else(|| Error::Internal("Q-row map missing".into()))?;
        let top_q = cat
            .descend_along_epi(
                dec_b.cokernel(n),
                &cat.compose(dec_c.cokernel(n), &g_at(n))?,
            )
            .ok_or_else(|| Error::Internal("Q-row map missing".into()))?;
        let bottom_l = cat
            .lift_through_mono(
                dec_b.kernel(n - 1),
                &cat.compose(&f_at(n - 1), dec_a.kernel(n - 1))?,
            )
            .ok_or_else(|| Error::Internal("K-row map missing".into()))?;
        let bottom_r = cat
            .lift_through_mono(
                dec_c.kernel(n - 1),
                &cat.compose(&g_at(n - 1), dec_b.kernel(n - 1))?,
            )
            .ok_or_else(|| Error::Internal("K-row map missing".into()))?;
        let six = relaxed_snake(
            cat,
            &RelaxedSnakeInput {
                top_k,
                top_q,
                bottom_l,
                bottom_r,
                kappa: dec_a.d_hat(n).clone(),
                xi: dec_b.d_hat(n).clone(),
                rho: dec_c.d_hat(n).clone(),
            },
        )?;
        // six.maps[2]: K(d_hat^C_n) = H^k_n C -> Q(d_hat^A_n) = H^c_{n-1} A
        let lam_c = lambda(cat, &c, &dec_c, n)?;
        let connecting = cat.compose(&six.maps[2], &lam_c)?;
        maps.push(connecting);
        let hc_a_next = homology_c(cat, &a, &dec_a, n - 1)?;
        nodes.push(LesNode { complex: 'A', degree: n - 1, object: hc_a_next.object });
    }
    // verify exactness at every interior node of the window
    for w in maps.windows(2) {
        if !is_exact_at(cat, &w[0], &w[1])? {
            return Err(Error::Internal(
                "long exact sequence failed exactness verification".into(),
            ));
        }
    }
    Ok(LongExactSequence { nodes, maps })
}
