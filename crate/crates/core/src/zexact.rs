//! The z-exact category contract and every construction derived from
//! kernels and cokernels alone: normal mono/epi recognition, the two
//! canonical factorizations and their comparison map, normal closures,
//! intersections, the special pullbacks/pushouts, and the kernel-pair
//! cross-check.

use crate::error::{Error, Result};

/// A backend category: pointed, with functorially chosen kernels and
/// cokernels. All operations are pure; canonical choices are deterministic
/// so repeated calls are bit-identical.
pub trait ZExact {
    type Obj: Clone + Eq + std::fmt::Debug;
    type Mor: Clone + std::fmt::Debug;

    fn name(&self) -> &'static str;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    /// Extensional equality on normalized data; false when dom/cod differ.
    fn eq_mor(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `compose(g, f)` is "g after f".
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn zero_object(&self) -> Self::Obj;
    fn is_zero_object(&self, x: &Self::Obj) -> bool;
    fn zero_mor(&self, x: &Self::Obj, y: &Self::Obj) -> Self::Mor;

    fn is_mono(&self, f: &Self::Mor) -> bool;
    fn is_epi(&self, f: &Self::Mor) -> bool;

    /// Canonical kernel `K(f) -> dom(f)`.
    fn kernel(&self, f: &Self::Mor) -> Self::Mor;
    /// Canonical cokernel `cod(f) -> Q(f)`.
    fn cokernel(&self, f: &Self::Mor) -> Self::Mor;

    /// For monic `m: M -> X` and `g: T -> X`, the unique `l: T -> M` with
    /// `m . l = g`, when g factors through m.
    fn lift_through_mono(&self, m: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
    /// For a (surjective) normal epi `e: X -> Q` and `g: X -> Z` constant on
    /// the fibers of e, the unique `l: Q -> Z` with `l . e = g`.
    fn descend_along_epi(&self, e: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;

    /// Binary product with canonical pair indexing.
    fn product(&self, x: &Self::Obj, y: &Self::Obj) -> (Self::Obj, Self::Mor, Self::Mor);
    /// Universal map `(f, g): T -> X x Y` for `f: T -> X`, `g: T -> Y`.
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// General pullback of `f: X -> Z`, `g: Y -> Z`; legs `P -> X`, `P -> Y`.
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor)
        -> Result<(Self::Obj, Self::Mor, Self::Mor)>;
    /// Kernel pair (pullback of f along itself) with both projections.
    fn kernel_pair(&self, f: &Self::Mor) -> (Self::Obj, Self::Mor, Self::Mor);

    /// Binary coproduct, where the backend has one.
    fn coproduct(&self, x: &Self::Obj, y: &Self::Obj)
        -> Result<(Self::Obj, Self::Mor, Self::Mor)>;
    /// Universal map `<f, g>: X + Y -> T`.
    fn copair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// General pushout of `f: Z -> X`, `g: Z -> Y`, where supported.
    fn pushout(&self, f: &Self::Mor, g: &Self::Mor)
        -> Result<(Self::Obj, Self::Mor, Self::Mor)>;

    /// Pointwise addition of parallel morphisms, for CMon-enriched backends.
    fn add_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn is_cmon_enriched(&self) -> bool {
        false
    }
    /// Homological backends admit the middle case of the 3x3 lemma.
    fn is_homological(&self) -> bool {
        false
    }

    /// The least subobject through which f factors (the set-level image);
    /// canonical monomorphism into cod(f).
    fn image_subobject(&self, f: &Self::Mor) -> Self::Mor;
    /// Least upper bound of two subobjects of the same object.
    fn join_subobjects(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor>;
    /// Greatest lower bound of two subobjects: the pullback subobject.
    /// Backends override this with carrier-level intersections.
    fn meet_subobjects(&self, m: &Self::Mor, n: &Self::Mor) -> Result<Self::Mor> {
        if self.cod(m) != self.cod(n) {
            return Err(Error::ComposeMismatch);
        }
        let (_p, l1, _l2) = self.pullback(m, n)?;
        self.compose(m, &l1)
    }
    /// Every subobject of x, as canonical monomorphisms. May be capped.
    fn enumerate_subobjects(&self, x: &Self::Obj) -> Result<Vec<Self::Mor>>;
    /// Every normal subobject of x.
    fn enumerate_normal_subobjects(&self, x: &Self::Obj) -> Result<Vec<Self::Mor>>;
    /// All morphisms x -> y, if feasibly enumerable under `cap` candidates.
    fn enumerate_homs(&self, x: &Self::Obj, y: &Self::Obj, cap: usize)
        -> Result<Vec<Self::Mor>>;
    /// A retraction of the mono m, when one exists.
    fn find_retraction(&self, m: &Self::Mor) -> Option<Self::Mor>;
    /// A section of the epi e, when one exists.
    fn find_section(&self, e: &Self::Mor) -> Option<Self::Mor>;

    /// Human- and report-facing canonical label for an object.
    fn object_label(&self, x: &Self::Obj) -> String;
}

/// A composite `second . first` equal to a factored morphism.
#[derive(Debug, Clone)]
pub struct Factorization<M> {
    pub first: M,
    pub second: M,
    pub kind: FactorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    NormalMono,
    NormalEpi,
    Normal,
    Image,
}

/// A subobject, carried by a monomorphism. Two subobjects are equal iff
/// each factors through the other.
#[derive(Debug, Clone)]
pub struct Subobject<M> {
    pub incl: M,
}

pub fn subobject_leq<C: ZExact>(cat: &C, m: &C::Mor, n: &C::Mor) -> bool {
    cat.lift_through_mono(n, m).is_some()
}

pub fn subobject_eq<C: ZExact>(cat: &C, m: &C::Mor, n: &C::Mor) -> bool {
    subobject_leq(cat, m, n) && subobject_leq(cat, n, m)
}

/// Comparison of quotient objects: the iso `cod(e1) -> cod(e2)` when e1 and
/// e2 present the same quotient, i.e. each descends along the other.
pub fn quotient_compare<C: ZExact>(cat: &C, e1: &C::Mor, e2: &C::Mor) -> Option<C::Mor> {
    let fwd = cat.descend_along_epi(e1, e2)?;
    cat.descend_along_epi(e2, e1)?;
    Some(fwd)
}

pub fn quotient_eq<C: ZExact>(cat: &C, e1: &C::Mor, e2: &C::Mor) -> bool {
    cat.descend_along_epi(e1, e2).is_some() && cat.descend_along_epi(e2, e1).is_some()
}

/// Isomorphism recognition: a morphism is invertible iff it is both a
/// normal epi and a mono.
pub fn iso_check<C: ZExact>(cat: &C, f: &C::Mor) -> bool {
    cat.is_mono(f) && is_normal_epi(cat, f)
}

/// Inverse of a verified isomorphism.
pub fn invert<C: ZExact>(cat: &C, f: &C::Mor) -> Result<C::Mor> {
    let id_cod = cat.identity(&cat.cod(f));
    let g = cat
        .lift_through_mono(f, &id_cod)
        .ok_or_else(|| Error::Precondition("invert: morphism is not an isomorphism".into()))?;
    Ok(g)
}

/// Is m the kernel of its cokernel?
pub fn is_normal_mono<C: ZExact>(cat: &C, m: &C::Mor) -> Result<bool> {
    if !cat.is_mono(m) {
        return Err(Error::NotMono("is_normal_mono".into()));
    }
    let k = cat.kernel(&cat.cokernel(m));
    Ok(subobject_eq(cat, m, &k))
}

/// Is e the cokernel of its kernel?
pub fn is_normal_epi<C: ZExact>(cat: &C, e: &C::Mor) -> bool {
    let c = cat.cokernel(&cat.kernel(e));
    quotient_eq(cat, e, &c)
}

/// Like `is_normal_epi` but with the epi precondition surfaced.
pub fn is_normal_epi_checked<C: ZExact>(cat: &C, e: &C::Mor) -> Result<bool> {
    if !cat.is_epi(e) {
        return Err(Error::NotEpi("is_normal_epi".into()));
    }
    Ok(is_normal_epi(cat, e))
}

/// Initial normal mono decomposition `f = m . u`, `m = ker(coker(f))`.
pub fn normal_mono_factorization<C: ZExact>(cat: &C, f: &C::Mor) -> Factorization<C::Mor> {
    let m = cat.kernel(&cat.cokernel(f));
    let u = cat
        .lift_through_mono(&m, f)
        .expect("f factors through ker(coker(f)) by the kernel universal property");
    Factorization { first: u, second: m, kind: FactorKind::NormalMono }
}

/// Terminal normal epi decomposition `f = v . e`, `e = coker(ker(f))`.
pub fn normal_epi_factorization<C: ZExact>(cat: &C, f: &C::Mor) -> Factorization<C::Mor> {
    let e = cat.cokernel(&cat.kernel(f));
    let v = cat
        .descend_along_epi(&e, f)
        .expect("f descends along coker(ker(f)) by the cokernel universal property");
    Factorization { first: e, second: v, kind: FactorKind::NormalEpi }
}

/// The unique comparison `EM(f): Q(ker f) -> K(coker f)` relating the normal
/// epi factorization to the normal mono factorization.
pub fn em_comparison<C: ZExact>(cat: &C, f: &C::Mor) -> C::Mor {
    let epi = normal_epi_factorization(cat, f);
    let mono = normal_mono_factorization(cat, f);
    let phi = cat
        .lift_through_mono(&mono.second, &epi.second)
        .expect("the two factorizations always admit the comparison map");
    debug_assert!({
        let other = cat.descend_along_epi(&epi.first, &mono.first).expect("dual route");
        cat.eq_mor(&phi, &other)
    });
    phi
}

/// A morphism is normal iff its EM comparison is an isomorphism.
pub fn is_normal_map<C: ZExact>(cat: &C, f: &C::Mor) -> bool {
    iso_check(cat, &em_comparison(cat, f))
}

/// Normal factorization `f = m . e` of a normal map, with e a normal epi and
/// m a normal mono.
pub fn normal_factorization<C: ZExact>(cat: &C, f: &C::Mor) -> Result<Factorization<C::Mor>> {
    let epi = normal_epi_factorization(cat, f);
    let mono = normal_mono_factorization(cat, f);
    let phi = cat
        .lift_through_mono(&mono.second, &epi.second)
        .ok_or_else(|| Error::Internal("EM comparison missing".into()))?;
    if !iso_check(cat, &phi) {
        return Err(Error::NotNormal { which: "f".into() });
    }
    Ok(Factorization { first: epi.first, second: mono.second, kind: FactorKind::Normal })
}

/// Image factorization (normal epi then mono), available iff EM(f) is monic.
pub fn image_factorization<C: ZExact>(cat: &C, f: &C::Mor) -> Result<Factorization<C::Mor>> {
    let epi = normal_epi_factorization(cat, f);
    if !cat.is_mono(&epi.second) {
        return Err(Error::NoImage);
    }
    Ok(Factorization { first: epi.first, second: epi.second, kind: FactorKind::Image })
}

/// Least normal subobject containing m: `ker(coker(m))`.
pub fn normal_closure<C: ZExact>(cat: &C, m: &C::Mor) -> Result<Subobject<C::Mor>> {
    if !cat.is_mono(m) {
        return Err(Error::NotMono("normal_closure".into()));
    }
    Ok(Subobject { incl: cat.kernel(&cat.cokernel(m)) })
}

/// Intersection of two normal subobjects of the same object, constructed as
/// `ker(coker(n) . m)` composed back into X.
pub fn intersect_normal<C: ZExact>(cat: &C, m: &C::Mor, n: &C::Mor)
    -> Result<Subobject<C::Mor>> {
    if !is_normal_mono(cat, m)? || !is_normal_mono(cat, n)? {
        return Err(Error::Precondition("intersect_normal: inputs must be normal monos".into()));
    }
    let q = cat.cokernel(n);
    let p = cat.kernel(&cat.compose(&q, m)?);
    let incl = cat.compose(m, &p)?;
    Ok(Subobject { incl })
}

/// Pullback of a normal mono m along an arbitrary f; returns
/// `(P -> dom f, P -> dom m)`. The first leg is `ker(coker(m) . f)`.
pub fn pullback_normal_mono<C: ZExact>(cat: &C, f: &C::Mor, m: &C::Mor)
    -> Result<(C::Mor, C::Mor)> {
    if !is_normal_mono(cat, m)? {
        return Err(Error::Precondition("pullback_normal_mono: m must be a normal mono".into()));
    }
    if cat.cod(f) != cat.cod(m) {
        return Err(Error::ComposeMismatch);
    }
    let q = cat.cokernel(m);
    let p = cat.kernel(&cat.compose(&q, f)?);
    let into_m = cat
        .lift_through_mono(m, &cat.compose(f, &p)?)
        .ok_or_else(|| Error::Internal("pullback square has no filler".into()))?;
    Ok((p, into_m))
}

/// Pushout of a normal epi e along an arbitrary f; returns
/// `(cod f -> P, cod e -> P)`. The first leg is `coker(f . ker(e))`.
pub fn pushout_normal_epi<C: ZExact>(cat: &C, f: &C::Mor, e: &C::Mor)
    -> Result<(C::Mor, C::Mor)> {
    if !is_normal_epi(cat, e) {
        return Err(Error::Precondition("pushout_normal_epi: e must be a normal epi".into()));
    }
    if cat.dom(f) != cat.dom(e) {
        return Err(Error::ComposeMismatch);
    }
    let k = cat.kernel(e);
    let j = cat.cokernel(&cat.compose(f, &k)?);
    let from_e = cat
        .descend_along_epi(e, &cat.compose(&j, f)?)
        .ok_or_else(|| Error::Internal("pushout square has no filler".into()))?;
    Ok((j, from_e))
}

/// `pr1 . ker(pr2)` over the kernel pair represents the kernel of f.
/// Used as a
/// cross-validation oracle against `kernel`.
pub fn kernel_from_kernel_pair<C: ZExact>(cat: &C, f: &C::Mor) -> Result<C::Mor> {
    let (_, pr1, pr2) = cat.kernel_pair(f);
    let k2 = cat.kernel(&pr2);
    cat.compose(&pr1, &k2)
}

/// The coproduct-to-product comparison `gamma: X + Y -> X x Y`, where the
/// backend has coproducts.
pub fn gamma_comparison<C: ZExact>(cat: &C, x: &C::Obj, y: &C::Obj) -> Result<C::Mor> {
    let (_, prod_from_x, prod_from_y) = {
        let (_p, _pr1, _pr2) = cat.product(x, y);
        let ix = cat.pair(&cat.identity(x), &cat.zero_mor(x, y))?;
        let iy = cat.pair(&cat.zero_mor(y, x), &cat.identity(y))?;
        (_p, ix, iy)
    };
    cat.copair(&prod_from_x, &prod_from_y)
}

/// Order-2 subnormal decomposition data: initial
/// `f = m1 . m2 . u` and terminal `f = v . e2 . e1`.
pub struct SubnormalDecomposition<M> {
    pub m1: M,
    pub m2: M,
    pub u: M,
    pub v: M,
    pub e2: M,
    pub e1: M,
}

pub fn subnormal_decomposition<C: ZExact>(cat: &C, f: &C::Mor) -> SubnormalDecomposition<C::Mor> {
    let first = normal_mono_factorization(cat, f);
    let second = normal_mono_factorization(cat, &first.first);
    let epi1 = normal_epi_factorization(cat, f);
    let epi2 = normal_epi_factorization(cat, &epi1.second);
    SubnormalDecomposition {
        m1: first.second,
        m2: second.second,
        u: second.first,
        v: epi2.second,
        e2: epi2.first,
        e1: epi1.first,
    }
}

/// f is subnormal when the residual u of its order-2 initial mono
/// decomposition is a normal epi.
pub fn is_subnormal_map<C: ZExact>(cat: &C, f: &C::Mor) -> bool {
    let d = subnormal_decomposition(cat, f);
    is_normal_epi(cat, &d.u)
}

/// f is cosubnormal when the residual v of its order-2 terminal epi
/// decomposition is a normal mono.
pub fn is_cosubnormal_map<C: ZExact>(cat: &C, f: &C::Mor) -> bool {
    let d = subnormal_decomposition(cat, f);
    cat.is_mono(&d.v) && is_normal_mono(cat, &d.v).unwrap_or(false)
}
