//! Subobject lattices with meet/join and modularity reporting, the
//! coproduct-to-product comparison, biproduct/product/split-extension
//! recognition, and the Chinese remainder isomorphism.

use crate::error::{Error, Result};
use crate::zexact::{
    gamma_comparison, intersect_normal, invert, is_normal_epi, is_normal_mono, iso_check,
    subobject_eq, subobject_leq, Subobject, ZExact,
};

/// Meet of two subobjects of the same object, as the pullback subobject.
pub fn meet<C: ZExact>(cat: &C, m: &C::Mor, n: &C::Mor) -> Result<Subobject<C::Mor>> {
    if cat.cod(m) != cat.cod(n) {
        return Err(Error::ComposeMismatch);
    }
    if !cat.is_mono(m) || !cat.is_mono(n) {
        return Err(Error::NotMono("meet of subobjects".into()));
    }
    Ok(Subobject { incl: cat.meet_subobjects(m, n)? })
}

/// Join of two subobjects, via the backend construction (image of the
/// copairing where coproducts exist, generated subobject otherwise).
pub fn join<C: ZExact>(cat: &C, m: &C::Mor, n: &C::Mor) -> Result<Subobject<C::Mor>> {
    if !cat.is_mono(m) || !cat.is_mono(n) {
        return Err(Error::NotMono("join of subobjects".into()));
    }
    Ok(Subobject { incl: cat.join_subobjects(m, n)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LatticeKind {
    All,
    Normal,
}

/// A witnessed failure of `M v (K ^ L) = (M v K) ^ L` for `M <= L`.
pub struct ModularityViolation<C: ZExact> {
    pub k: C::Mor,
    pub l: C::Mor,
    pub m: C::Mor,
    pub lhs: C::Mor,
    pub rhs: C::Mor,
}

/// Scan every triple of the chosen subobject lattice of x and report the
/// violations of the modular law.
pub fn modularity_report<C: ZExact>(cat: &C, x: &C::Obj, kind: LatticeKind)
    -> Result<Vec<ModularityViolation<C>>> {
    let subs = match kind {
        LatticeKind::All => cat.enumerate_subobjects(x)?,
        LatticeKind::Normal => cat.enumerate_normal_subobjects(x)?,
    };
    let mut violations = Vec::new();
    for k in &subs {
        for l in &subs {
            for m in &subs {
                if !subobject_leq(cat, m, l) {
                    continue;
                }
                let kl = meet(cat, k, l)?.incl;
                let lhs = join(cat, m, &kl)?.incl;
                let mk = join(cat, m, k)?.incl;
                let rhs = meet(cat, &mk, l)?.incl;
                if !subobject_eq(cat, &lhs, &rhs) {
                    violations.push(ModularityViolation {
                        k: k.clone(),
                        l: l.clone(),
                        m: m.clone(),
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GammaClass {
    Iso,
    SplitMono,
    NormalEpi,
    Other,
}

/// Build the comparison `gamma: A + B -> A x B` and classify it.
pub fn gamma<C: ZExact>(cat: &C, a: &C::Obj, b: &C::Obj) -> Result<(C::Mor, GammaClass)> {
    let g = gamma_comparison(cat, a, b)?;
    let class = if iso_check(cat, &g) {
        GammaClass::Iso
    } else if cat.is_mono(&g) && cat.find_retraction(&g).is_some() {
        GammaClass::SplitMono
    } else if is_normal_epi(cat, &g) {
        GammaClass::NormalEpi
    } else {
        GammaClass::Other
    };
    Ok((g, class))
}

/// Biproduct recognition for CMon-enriched backends: the two triangle
/// identities, the two vanishing composites, and i_A p_A + i_B p_B = 1.
pub fn biproduct_recognize<C: ZExact>(
    cat: &C,
    i_a: &C::Mor,
    i_b: &C::Mor,
    p_a: &C::Mor,
    p_b: &C::Mor,
) -> Result<bool> {
    if !cat.is_cmon_enriched() {
        return Err(Error::Unsupported(format!(
            "biproduct recognition needs a CMon-enriched backend; {} is not",
            cat.name()
        )));
    }
    let a = cat.dom(i_a);
    let b = cat.dom(i_b);
    let mid = cat.cod(i_a);
    if cat.cod(i_b) != mid || cat.dom(p_a) != mid || cat.dom(p_b) != mid {
        return Err(Error::ComposeMismatch);
    }
    let ok = cat.eq_mor(&cat.compose(p_a, i_a)?, &cat.identity(&a))
        && cat.eq_mor(&cat.compose(p_b, i_b)?, &cat.identity(&b))
        && cat.eq_mor(&cat.compose(p_b, i_a)?, &cat.zero_mor(&a, &b))
        && cat.eq_mor(&cat.compose(p_a, i_b)?, &cat.zero_mor(&b, &a))
        && {
            let e1 = cat.compose(i_a, p_a)?;
            let e2 = cat.compose(i_b, p_b)?;
            let sum = cat.add_mor(&e1, &e2)?;
            cat.eq_mor(&sum, &cat.identity(&mid))
        };
    Ok(ok)
}

/// `K ^ Y = 0` and `K v Y = X` recognize a split extension;
/// the split short exact sequence is emitted with its section.
pub struct SplitExtension<C: ZExact> {
    pub k: C::Mor,
    pub q: C::Mor,
    pub section: C::Mor,
}

pub fn split_extension_recognize<C: ZExact>(cat: &C, k: &C::Mor, y: &C::Mor)
    -> Result<Option<SplitExtension<C>>> {
    if !cat.is_homological() {
        return Err(Error::Unsupported(format!(
            "split extension recognition needs a homological backend; {} is not",
            cat.name()
        )));
    }
    if cat.cod(k) != cat.cod(y) {
        return Err(Error::ComposeMismatch);
    }
    if !is_normal_mono(cat, k)? {
        return Err(Error::NotMono("K must be a normal subobject".into()));
    }
    if !cat.is_mono(y) {
        return Err(Error::NotMono("Y must be a subobject".into()));
    }
    let x = cat.cod(k);
    let meet_ky = meet(cat, k, y)?;
    if !cat.is_zero_object(&cat.dom(&meet_ky.incl)) {
        return Ok(None);
    }
    let join_ky = join(cat, k, y)?;
    if !subobject_eq(cat, &join_ky.incl, &cat.identity(&x)) {
        return Ok(None);
    }
    let q = cat.cokernel(k);
    let qy = cat.compose(&q, y)?;
    if !iso_check(cat, &qy) {
        return Ok(None);
    }
    let section = cat.compose(y, &invert(cat, &qy)?)?;
    debug_assert!(cat.eq_mor(&cat.compose(&q, &section).unwrap(), &cat.identity(&cat.cod(&q))));
    Ok(Some(SplitExtension { k: k.clone(), q, section }))
}

/// Do q and p present T as a product of their codomains, via mutually
/// sectioning short exact sequences?
/// On success the pairing `(q, p): T -> A x B` is returned as an explicit
/// isomorphism.
pub fn product_recognize<C: ZExact>(cat: &C, q: &C::Mor, p: &C::Mor)
    -> Result<Option<C::Mor>> {
    if cat.dom(q) != cat.dom(p) {
        return Err(Error::ComposeMismatch);
    }
    if !is_normal_epi(cat, q) || !is_normal_epi(cat, p) {
        return Ok(None);
    }
    // mutually sectioning short exact sequences: ker(p) composed with q is
    // an isomorphism, and dually
    let i0 = cat.kernel(p);
    let j0 = cat.kernel(q);
    if !iso_check(cat, &cat.compose(q, &i0)?) || !iso_check(cat, &cat.compose(p, &j0)?) {
        return Ok(None);
    }
    let pairing = cat.pair(q, p)?;
    if !iso_check(cat, &pairing) {
        return Ok(None);
    }
    Ok(Some(pairing))
}

/// Chinese remainder: for normal subobjects with `K v L = X`, the
/// canonical map
/// `X/(K ^ L) -> X/L x X/K` is an isomorphism; construct and verify it.
pub fn chinese_remainder<C: ZExact>(cat: &C, k: &C::Mor, l: &C::Mor) -> Result<C::Mor> {
    if cat.cod(k) != cat.cod(l) {
        return Err(Error::ComposeMismatch);
    }
    let x = cat.cod(k);
    if !subobject_eq(cat, &join(cat, k, l)?.incl, &cat.identity(&x)) {
        return Err(Error::Precondition("chinese remainder needs K v L = X".into()));
    }
    let kl = intersect_normal(cat, k, l)?;
    let proj = cat.cokernel(&kl.incl);
    let target = cat.pair(&cat.cokernel(l), &cat.cokernel(k))?;
    let iso = cat
        .descend_along_epi(&proj, &target)
        .ok_or_else(|| Error::Internal("combined quotient map does not descend".into()))?;
    if !iso_check(cat, &iso) {
        return Err(Error::Internal("chinese remainder comparison is not an iso".into()));
    }
    Ok(iso)
}

/// An object is abelian iff its diagonal is a normal
/// monomorphism.
pub fn abelian_object_check<C: ZExact>(cat: &C, x: &C::Obj) -> Result<bool> {
    let id = cat.identity(x);
    let diag = cat.pair(&id, &id)?;
    is_normal_mono(cat, &diag)
}
