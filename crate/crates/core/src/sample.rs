//! Seeded random generation of test instances: short exact sequence
//! morphisms with normal verticals, normal chain complexes, and plain
//! morphisms per backend. The seed comes from EXACTA_SEED when set.

use crate::diexact::{ses_from_normal_mono, Ses, SesMorphism};
use crate::error::{Error, Result};
use crate::homology::ChainComplex;
use crate::zexact::{is_normal_map, pullback_normal_mono, ZExact};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0xE5AC7A;

pub fn rng_from_env() -> ChaCha8Rng {
    let seed = std::env::var("EXACTA_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed)
}

fn choose<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// A morphism of short exact sequences with normal vertical maps, built
/// from an object Y and two of its normal subobjects L and N:
///
/// ```text
///   N ^ L >--> N -->> N/(N ^ L)
///     |        |          |
///     L  >-->  Y  -->>   Y/L
/// ```
pub fn sample_ses_morphism<C: ZExact>(
    cat: &C,
    rng: &mut ChaCha8Rng,
    pool: &[C::Obj],
) -> Result<SesMorphism<C>> {
    for _ in 0..64 {
        let y = choose(rng, pool);
        let normals = cat.enumerate_normal_subobjects(y)?;
        if normals.is_empty() {
            continue;
        }
        let l = choose(rng, &normals).clone();
        let n = choose(rng, &normals).clone();
        let bottom = ses_from_normal_mono(cat, &l)?;
        let (p, into_l) = pullback_normal_mono(cat, &n, &l)?;
        let top = ses_from_normal_mono(cat, &p)?;
        let rho = cat
            .descend_along_epi(&top.q, &cat.compose(&bottom.q, &n)?)
            .ok_or_else(|| Error::Internal("sampled rho missing".into()))?;
        let msm = SesMorphism::new(cat, top, bottom, into_l, n, rho)?;
        if is_normal_map(cat, &msm.kappa)
            && is_normal_map(cat, &msm.xi)
            && is_normal_map(cat, &msm.rho)
        {
            return Ok(msm);
        }
    }
    Err(Error::Internal("could not sample an SES morphism from the pool".into()))
}

/// The short exact sequence `N >-> Y ->> Y/N` for a random normal
/// subobject of a random pool object.
pub fn sample_ses<C: ZExact>(cat: &C, rng: &mut ChaCha8Rng, pool: &[C::Obj])
    -> Result<Ses<C>> {
    let y = choose(rng, pool);
    let normals = cat.enumerate_normal_subobjects(y)?;
    let n = choose(rng, &normals).clone();
    ses_from_normal_mono(cat, &n)
}

/// `... 0 -> N -> G -> G/N -> 0 ...`: an exact piece occupying three
/// consecutive degrees starting at `lo`.
pub fn exact_piece<C: ZExact>(cat: &C, n_incl: &C::Mor, lo: i64) -> Result<ChainComplex<C>> {
    let q = cat.cokernel(n_incl);
    let objects = vec![cat.cod(&q), cat.dom(&q), cat.dom(n_incl)];
    ChainComplex::new(cat, lo, objects, vec![q, n_incl.clone()])
}

/// Zero differentials over the listed objects.
pub fn hole_piece<C: ZExact>(cat: &C, objects: Vec<C::Obj>, lo: i64)
    -> Result<ChainComplex<C>> {
    let diffs = objects
        .windows(2)
        .map(|w| cat.zero_mor(&w[1], &w[0]))
        .collect();
    ChainComplex::new(cat, lo, objects, diffs)
}

/// Degreewise product of two complexes over the union of their windows.
pub fn product_complex<C: ZExact>(cat: &C, a: &ChainComplex<C>, b: &ChainComplex<C>)
    -> Result<ChainComplex<C>> {
    let lo = a.lo.min(b.lo);
    let hi = a.hi.max(b.hi);
    let mut objects = Vec::new();
    for n in lo..=hi {
        let (p, _, _) = cat.product(&a.object(cat, n), &b.object(cat, n));
        objects.push(p);
    }
    let mut diffs = Vec::new();
    for n in (lo + 1)..=hi {
        let (_, pr_a, pr_b) = cat.product(&a.object(cat, n), &b.object(cat, n));
        let da = cat.compose(&a.diff(cat, n), &pr_a)?;
        let db = cat.compose(&b.diff(cat, n), &pr_b)?;
        diffs.push(cat.pair(&da, &db)?);
    }
    ChainComplex::new(cat, lo, objects, diffs)
}

/// A random normal complex with a window of length at most `max_len`,
/// assembled from exact and hole pieces (optionally multiplied together).
pub fn sample_normal_complex<C: ZExact>(
    cat: &C,
    rng: &mut ChaCha8Rng,
    pool: &[C::Obj],
    max_len: usize,
) -> Result<ChainComplex<C>> {
    let piece = |rng: &mut ChaCha8Rng, cat: &C| -> Result<ChainComplex<C>> {
        if rng.gen_bool(0.5) {
            let y = choose(rng, pool);
            let normals = cat.enumerate_normal_subobjects(y)?;
            let n = choose(rng, &normals).clone();
            exact_piece(cat, &n, rng.gen_range(0..=(max_len as i64 - 3).max(0)))
        } else {
            let len = rng.gen_range(2..=max_len.min(3));
            let objects = (0..len).map(|_| choose(rng, pool).clone()).collect();
            hole_piece(cat, objects, rng.gen_range(0..=(max_len - len) as i64))
        }
    };
    let first = piece(rng, cat)?;
    if rng.gen_bool(0.4) {
        let second = piece(rng, cat)?;
        product_complex(cat, &first, &second)
    } else {
        Ok(first)
    }
}

/// A random morphism between random pool objects, drawn uniformly from the
/// (capped) hom enumeration.
pub fn sample_morphism<C: ZExact>(
    cat: &C,
    rng: &mut ChaCha8Rng,
    pool: &[C::Obj],
    hom_cap: usize,
) -> Result<C::Mor> {
    for _ in 0..64 {
        let x = choose(rng, pool);
        let y = choose(rng, pool);
        match cat.enumerate_homs(x, y, hom_cap) {
            Ok(homs) if !homs.is_empty() => return Ok(choose(rng, &homs).clone()),
            Ok(_) => continue,
            Err(Error::BoundExceeded(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal("could not sample a morphism from the pool".into()))
}

/// Standard object pools per backend.
pub mod pools {
    use crate::fgab::AbObject;
    use crate::fingrp::{catalog, FinGroup};
    use crate::setpt::PointedSet;

    pub fn setpt(max_size: usize) -> Vec<PointedSet> {
        (1..=max_size).map(|size| PointedSet { size }).collect()
    }

    pub fn cmon(max_order: usize) -> Vec<crate::cmon::CMonoid> {
        crate::cmon::enumerate_cmonoids(max_order)
    }

    pub fn groups(max_order: usize) -> Vec<FinGroup> {
        catalog::bundle()
            .into_iter()
            .map(|(_, g)| g)
            .filter(|g| g.size <= max_order)
            .collect()
    }

    pub fn ab(max_order: usize) -> Vec<AbObject> {
        let mut out = Vec::new();
        for order in 1..=max_order {
            for factors in catalog::abelian_factorizations(order) {
                let torsion: Vec<i64> = factors.iter().map(|&f| f as i64).collect();
                out.push(AbObject::from_factors(&torsion, 0));
            }
        }
        out
    }
}
