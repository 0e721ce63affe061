//! Brute-force axiom probes: exhaustive scans of instance families for
//! counterexamples to HSD, DPN, ANN, AEN, PNE and KSG, with replayable
//! witnesses and a deterministic, shardable enumeration order.

use crate::error::{Error, Result};
use crate::zexact::{is_normal_epi, is_normal_map, iso_check, ZExact};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomId {
    Ann,
    Dpn,
    Hsd,
    Aen,
    Ksg,
    Pne,
}

impl std::str::FromStr for AxiomId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ann" => Ok(AxiomId::Ann),
            "dpn" => Ok(AxiomId::Dpn),
            "hsd" => Ok(AxiomId::Hsd),
            "aen" => Ok(AxiomId::Aen),
            "ksg" => Ok(AxiomId::Ksg),
            "pne" => Ok(AxiomId::Pne),
            other => Err(Error::Validation(format!("unknown axiom {other}"))),
        }
    }
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AxiomId::Ann => "ann",
            AxiomId::Dpn => "dpn",
            AxiomId::Hsd => "hsd",
            AxiomId::Aen => "aen",
            AxiomId::Ksg => "ksg",
            AxiomId::Pne => "pne",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProbeBound {
    /// cap on carrier sizes of scanned instances
    pub max_size: usize,
    /// cap on the number of individual diagram checks; scans past it are
    /// reported as incomplete
    pub max_checks: Option<u64>,
}

impl ProbeBound {
    pub fn size(max_size: usize) -> Self {
        ProbeBound { max_size, max_checks: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoCounterexample,
    Counterexample,
}

/// A replayable counterexample diagram.
#[derive(Debug)]
pub enum Witness<C: ZExact> {
    /// mu then eps, for ANN / DPN / HSD
    AntinormalPair { mu: C::Mor, eps: C::Mor },
    /// split epi that is not a cokernel of its kernel, for AEN
    SplitEpi { epi: C::Mor, section: C::Mor },
    /// normal epi whose pullback along `along` is not a normal epi, for PNE
    PullbackSquare { epi: C::Mor, along: C::Mor },
    /// proper subobject through which kernel and section jointly factor,
    /// for KSG
    JointlyFactoring { epi: C::Mor, section: C::Mor, sub: C::Mor },
}

impl<C: ZExact> Clone for Witness<C> {
    fn clone(&self) -> Self {
        match self {
            Witness::AntinormalPair { mu, eps } => {
                Witness::AntinormalPair { mu: mu.clone(), eps: eps.clone() }
            }
            Witness::SplitEpi { epi, section } => {
                Witness::SplitEpi { epi: epi.clone(), section: section.clone() }
            }
            Witness::PullbackSquare { epi, along } => {
                Witness::PullbackSquare { epi: epi.clone(), along: along.clone() }
            }
            Witness::JointlyFactoring { epi, section, sub } => Witness::JointlyFactoring {
                epi: epi.clone(),
                section: section.clone(),
                sub: sub.clone(),
            },
        }
    }
}

#[derive(Debug)]
pub struct AxiomReport<C: ZExact> {
    pub axiom: AxiomId,
    pub backend: String,
    pub max_size: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness<C>>,
    pub checks: u64,
    pub incomplete: bool,
}

/// Per-backend instance enumeration for the prober.
pub trait ProbeInstances: ZExact {
    /// Deterministically ordered instances with carriers up to `max_size`,
    /// deduplicated up to isomorphism where that is cheap.
    fn probe_objects(&self, max_size: usize) -> Vec<Self::Obj>;
    fn obj_size(&self, o: &Self::Obj) -> usize;
}

/// Enumerate the normal epis out of x as cokernels of its normal
/// subobjects (the normal subobject / quotient inversion).
fn normal_epis_out_of<C: ZExact>(cat: &C, x: &C::Obj) -> Result<Vec<C::Mor>> {
    Ok(cat
        .enumerate_normal_subobjects(x)?
        .iter()
        .map(|m| cat.cokernel(m))
        .collect())
}

struct ObjectScan<C: ZExact> {
    checks: u64,
    counterexample: Option<Witness<C>>,
}

fn scan_object<C>(cat: &C, axiom: AxiomId, objects: &[C::Obj], x: &C::Obj, hom_cap: usize)
    -> Result<ObjectScan<C>>
where
    C: ZExact + ProbeInstances,
{
    let mut checks = 0u64;
    let mut counterexample = None;
    match axiom {
        AxiomId::Ann | AxiomId::Dpn | AxiomId::Hsd => {
            let monos = cat.enumerate_normal_subobjects(x)?;
            let epis = normal_epis_out_of(cat, x)?;
            'outer: for mu in &monos {
                for eps in &epis {
                    checks += 1;
                    let alpha = cat.compose(eps, mu)?;
                    let relevant = match axiom {
                        AxiomId::Ann => true,
                        AxiomId::Dpn => is_normal_map(cat, &alpha),
                        AxiomId::Hsd => {
                            let zero = cat.zero_mor(&cat.dom(mu), &cat.cod(eps));
                            cat.eq_mor(&alpha, &zero)
                        }
                        _ => unreachable!(),
                    };
                    if !relevant {
                        continue;
                    }
                    let violated = match axiom {
                        AxiomId::Ann => !is_normal_map(cat, &alpha),
                        AxiomId::Dpn | AxiomId::Hsd => {
                            let pi = cat.cokernel(mu);
                            let kappa = cat.kernel(eps);
                            let omega = cat.compose(&pi, &kappa)?;
                            !is_normal_map(cat, &omega)
                        }
                        _ => unreachable!(),
                    };
                    if violated {
                        counterexample =
                            Some(Witness::AntinormalPair { mu: mu.clone(), eps: eps.clone() });
                        break 'outer;
                    }
                }
            }
        }
        AxiomId::Aen => {
            'outer_aen: for q_obj in objects {
                if cat.obj_size(q_obj) > cat.obj_size(x) {
                    continue;
                }
                let homs = match cat.enumerate_homs(x, q_obj, hom_cap) {
                    Ok(h) => h,
                    Err(Error::BoundExceeded(_)) => continue,
                    Err(e) => return Err(e),
                };
                for q in homs {
                    if !cat.is_epi(&q) {
                        continue;
                    }
                    let Some(section) = cat.find_section(&q) else { continue };
                    checks += 1;
                    if !is_normal_epi(cat, &q) {
                        counterexample = Some(Witness::SplitEpi { epi: q, section });
                        break 'outer_aen;
                    }
                }
            }
        }
        AxiomId::Pne => {
            // normal epis g: x ->> y, pulled back along every hom f: z -> y
            let epis = normal_epis_out_of(cat, x)?;
            'outer_pne: for g in &epis {
                let y = cat.cod(g);
                for z in objects {
                    let homs = match cat.enumerate_homs(z, &y, hom_cap) {
                        Ok(h) => h,
                        Err(Error::BoundExceeded(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    for f in homs {
                        checks += 1;
                        let (_p, leg_to_z, _leg) = cat.pullback(&f, g)?;
                        if !is_normal_epi(cat, &leg_to_z) {
                            counterexample =
                                Some(Witness::PullbackSquare { epi: g.clone(), along: f });
                            break 'outer_pne;
                        }
                    }
                }
            }
        }
        AxiomId::Ksg => {
            let subobjects = cat.enumerate_subobjects(x)?;
            'outer_ksg: for q_obj in objects {
                if cat.obj_size(q_obj) > cat.obj_size(x) {
                    continue;
                }
                let homs = match cat.enumerate_homs(x, q_obj, hom_cap) {
                    Ok(h) => h,
                    Err(Error::BoundExceeded(_)) => continue,
                    Err(e) => return Err(e),
                };
                for q in homs {
                    if !cat.is_epi(&q) {
                        continue;
                    }
                    let Some(section) = cat.find_section(&q) else { continue };
                    let kernel = cat.kernel(&q);
                    for m in &subobjects {
                        checks += 1;
                        if iso_check(cat, m) {
                            continue; // improper subobjects always qualify
                        }
                        let both_factor = cat.lift_through_mono(m, &kernel).is_some()
                            && cat.lift_through_mono(m, &section).is_some();
                        if both_factor {
                            counterexample = Some(Witness::JointlyFactoring {
                                epi: q,
                                section,
                                sub: m.clone(),
                            });
                            break 'outer_ksg;
                        }
                    }
                }
            }
        }
    }
    Ok(ObjectScan { checks, counterexample })
}

/// Run one probe. The scan is sharded over instances; shard results merge
/// in enumeration order, so the report does not depend on the thread count.
pub fn probe<C>(cat: &C, axiom: AxiomId, bound: &ProbeBound) -> Result<AxiomReport<C>>
where
    C: ZExact + ProbeInstances + Sync,
    C::Obj: Send + Sync,
    C::Mor: Send + Sync,
{
    let objects = cat.probe_objects(bound.max_size);
    let hom_cap = 1 << 16;
    let scans: Vec<Result<ObjectScan<C>>> = objects
        .par_iter()
        .map(|x| scan_object(cat, axiom, &objects, x, hom_cap))
        .collect();
    let mut checks = 0u64;
    let mut witness = None;
    let mut incomplete = false;
    for scan in scans {
        let scan = scan?;
        if let Some(cap) = bound.max_checks {
            if checks.saturating_add(scan.checks) > cap {
                incomplete = true;
                break;
            }
        }
        checks += scan.checks;
        if witness.is_none() {
            witness = scan.counterexample;
            if witness.is_some() {
                break;
            }
        }
    }
    Ok(AxiomReport {
        axiom,
        backend: cat.name().to_string(),
        max_size: bound.max_size,
        verdict: if witness.is_some() {
            Verdict::Counterexample
        } else {
            Verdict::NoCounterexample
        },
        witness,
        checks,
        incomplete,
    })
}

/// Re-run the single check encoded by a witness; true when the witness
/// still demonstrates the violation.
pub fn replay<C: ZExact>(cat: &C, axiom: AxiomId, witness: &Witness<C>) -> Result<bool> {
    match (axiom, witness) {
        (AxiomId::Ann, Witness::AntinormalPair { mu, eps }) => {
            let alpha = cat.compose(eps, mu)?;
            Ok(!is_normal_map(cat, &alpha))
        }
        (AxiomId::Dpn, Witness::AntinormalPair { mu, eps }) => {
            let alpha = cat.compose(eps, mu)?;
            let pi = cat.cokernel(mu);
            let kappa = cat.kernel(eps);
            let omega = cat.compose(&pi, &kappa)?;
            Ok(is_normal_map(cat, &alpha) && !is_normal_map(cat, &omega))
        }
        (AxiomId::Hsd, Witness::AntinormalPair { mu, eps }) => {
            let alpha = cat.compose(eps, mu)?;
            let zero = cat.zero_mor(&cat.dom(mu), &cat.cod(eps));
            let pi = cat.cokernel(mu);
            let kappa = cat.kernel(eps);
            let omega = cat.compose(&pi, &kappa)?;
            Ok(cat.eq_mor(&alpha, &zero) && !is_normal_map(cat, &omega))
        }
        (AxiomId::Aen, Witness::SplitEpi { epi, section }) => {
            let qs = cat.compose(epi, section)?;
            let split = cat.eq_mor(&qs, &cat.identity(&cat.cod(epi)));
            Ok(split && !is_normal_epi(cat, epi))
        }
        (AxiomId::Pne, Witness::PullbackSquare { epi, along }) => {
            let (_p, leg, _other) = cat.pullback(along, epi)?;
            Ok(is_normal_epi(cat, epi) && !is_normal_epi(cat, &leg))
        }
        (AxiomId::Ksg, Witness::JointlyFactoring { epi, section, sub }) => {
            let qs = cat.compose(epi, section)?;
            let split = cat.eq_mor(&qs, &cat.identity(&cat.cod(epi)));
            let kernel = cat.kernel(epi);
            Ok(split
                && !iso_check(cat, sub)
                && cat.lift_through_mono(sub, &kernel).is_some()
                && cat.lift_through_mono(sub, section).is_some())
        }
        _ => Err(Error::Validation("witness shape does not match the axiom".into())),
    }
}

impl ProbeInstances for crate::setpt::SetPt {
    fn probe_objects(&self, max_size: usize) -> Vec<Self::Obj> {
        (1..=max_size).map(|size| crate::setpt::PointedSet { size }).collect()
    }

    fn obj_size(&self, o: &Self::Obj) -> usize {
        o.size
    }
}

impl ProbeInstances for crate::cmon::CMonCat {
    fn probe_objects(&self, max_size: usize) -> Vec<Self::Obj> {
        crate::cmon::enumerate_cmonoids(max_size)
    }

    fn obj_size(&self, o: &Self::Obj) -> usize {
        o.size
    }
}

impl ProbeInstances for crate::fingrp::Grp {
    fn probe_objects(&self, max_size: usize) -> Vec<Self::Obj> {
        let mut out: Vec<crate::fingrp::FinGroup> = Vec::new();
        for (_, g) in crate::fingrp::catalog::bundle() {
            if g.size > max_size {
                continue;
            }
            if out.iter().any(|h| self.find_isomorphism(h, &g).is_some()) {
                continue;
            }
            out.push(g);
        }
        out.sort_by_key(|g| g.size);
        out
    }

    fn obj_size(&self, o: &Self::Obj) -> usize {
        o.size
    }
}

impl ProbeInstances for crate::fgab::AbCat {
    fn probe_objects(&self, max_size: usize) -> Vec<Self::Obj> {
        let mut out = Vec::new();
        for order in 1..=max_size {
            for factors in crate::fingrp::catalog::abelian_factorizations(order) {
                let torsion: Vec<i64> = factors.iter().map(|&f| f as i64).collect();
                out.push(crate::fgab::AbObject::from_factors(&torsion, 0));
            }
        }
        out
    }

    fn obj_size(&self, o: &Self::Obj) -> usize {
        o.canon()
            .order()
            .and_then(|o| usize::try_from(o).ok())
            .unwrap_or(usize::MAX)
    }
}
