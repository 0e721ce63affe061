//! Finitely generated abelian groups as integer-matrix presentations
//! `Z^rank / rowspan(relations)`, with all structure computed through the
//! Smith normal form. Arbitrary-precision integers throughout.

use crate::error::{Error, Result};
use crate::matrix::{left_kernel_basis, snf, solve_left, Int, Mat};
use crate::zexact::ZExact;
use num_traits::{One, Zero};
use std::sync::OnceLock;

/// Canonical data for a presentation: unimodular change of coordinates `v`
/// with `x |-> x v` diagonalizing the relation lattice; `moduli[j]` is the
/// modulus of canonical coordinate j (0 means a free coordinate).
#[derive(Debug, Clone)]
pub struct CanonForm {
    pub moduli: Vec<Int>,
    pub v: Mat,
    pub v_inv: Mat,
}

impl CanonForm {
    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|m| m.is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<Int> {
        self.moduli.iter().filter(|m| !m.is_zero() && !m.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(|m| m.is_one())
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|m| !m.is_zero())
    }

    pub fn order(&self) -> Option<Int> {
        if !self.is_finite() {
            return None;
        }
        let mut o = Int::one();
        for m in &self.moduli {
            o *= m;
        }
        Some(o)
    }

    fn reduce_row(&self, row: &[Int]) -> Vec<Int> {
        row.iter()
            .zip(&self.moduli)
            .map(|(x, m)| {
                if m.is_zero() {
                    x.clone()
                } else {
                    num_integer::Integer::mod_floor(x, m)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct AbObject {
    pub rank: usize,
    pub rels: Mat,
    canon: OnceLock<CanonForm>,
}

impl PartialEq for AbObject {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rels == other.rels
    }
}
impl Eq for AbObject {}
impl std::hash::Hash for AbObject {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.rels.hash(state);
    }
}

impl AbObject {
    pub fn new(rank: usize, rels: Mat) -> Result<Self> {
        if rels.cols != rank {
            return Err(Error::Validation(format!(
                "relations have {} columns but the presentation rank is {rank}",
                rels.cols
            )));
        }
        Ok(AbObject { rank, rels, canon: OnceLock::new() })
    }

    pub fn free(rank: usize) -> Self {
        AbObject { rank, rels: Mat::zero(0, rank), canon: OnceLock::new() }
    }

    /// `Z/d1 + Z/d2 + ... + Z^free` with the listed torsion orders.
    pub fn from_factors(torsion: &[i64], free: usize) -> Self {
        let rank = torsion.len() + free;
        let mut rels = Mat::zero(torsion.len(), rank);
        for (i, &d) in torsion.iter().enumerate() {
            rels[(i, i)] = Int::from(d);
        }
        AbObject { rank, rels, canon: OnceLock::new() }
    }

    pub fn canon(&self) -> &CanonForm {
        self.canon.get_or_init(|| {
            let s = snf(&self.rels);
            let mind = self.rels.rows.min(self.rank);
            let moduli = (0..self.rank)
                .map(|j| if j < mind { s.d[(j, j)].clone() } else { Int::zero() })
                .collect();
            CanonForm { moduli, v: s.v, v_inv: s.v_inv }
        })
    }

    pub fn label(&self) -> String {
        let c = self.canon();
        let mut parts: Vec<String> =
            c.invariant_factors().iter().map(|d| format!("Z/{d}")).collect();
        for _ in 0..c.free_rank() {
            parts.push("Z".to_string());
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbMorphism {
    pub dom: AbObject,
    pub cod: AbObject,
    pub mat: Mat,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AbCat;

impl AbCat {
    pub fn morphism(&self, dom: AbObject, cod: AbObject, mat: Mat) -> Result<AbMorphism> {
        if mat.rows != dom.rank || mat.cols != cod.rank {
            return Err(Error::Validation("morphism matrix shape mismatch".into()));
        }
        let f = AbMorphism { dom, cod, mat };
        if !self.is_valid(&f) {
            return Err(Error::Validation(
                "matrix does not descend to the quotient presentations".into(),
            ));
        }
        Ok(self.reduced(f))
    }

    fn is_valid(&self, f: &AbMorphism) -> bool {
        let c = f.cod.canon();
        let probe = f.dom.rels.mul(&f.mat).mul(&c.v);
        (0..probe.rows).all(|i| {
            probe.row(i).iter().zip(&c.moduli).all(|(x, m)| {
                if m.is_zero() {
                    x.is_zero()
                } else {
                    (x % m).is_zero()
                }
            })
        })
    }

    pub fn neg_mor(&self, f: &AbMorphism) -> AbMorphism {
        self.reduced(AbMorphism { dom: f.dom.clone(), cod: f.cod.clone(), mat: f.mat.neg() })
    }

    /// Normalize a morphism by reducing its matrix modulo the relation
    /// lattice of the codomain; keeps coefficient growth in check across
    /// chained constructions.
    fn reduced(&self, f: AbMorphism) -> AbMorphism {
        let c = f.cod.canon();
        let mut mc = f.mat.mul(&c.v);
        let mut changed = false;
        for i in 0..mc.rows {
            for j in 0..mc.cols {
                if c.moduli[j].is_zero() {
                    continue;
                }
                let r = num_integer::Integer::mod_floor(&mc[(i, j)], &c.moduli[j]);
                if r != mc[(i, j)] {
                    mc[(i, j)] = r;
                    changed = true;
                }
            }
        }
        if !changed {
            return f;
        }
        let mat = mc.mul(&c.v_inv);
        AbMorphism { dom: f.dom.clone(), cod: f.cod.clone(), mat }
    }

    /// Solve `X * A ≡ B` where column j of the residue is taken mod `mu[j]`
    /// (0 meaning exact). Rows of X are independent; one SNF call.
    fn solve_rows_mod(a: &Mat, b: &Mat, mu: &[Int]) -> Option<Mat> {
        let slack: Vec<usize> =
            (0..mu.len()).filter(|&j| !mu[j].is_zero()).collect();
        let mut aug = Mat::zero(a.rows + slack.len(), a.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                aug[(i, j)] = a[(i, j)].clone();
            }
        }
        for (i, &j) in slack.iter().enumerate() {
            aug[(a.rows + i, j)] = mu[j].clone();
        }
        let x = solve_left(&aug, b)?;
        if x.rows == 0 {
            return Some(Mat::zero(0, a.rows));
        }
        let rows = (0..x.rows)
            .map(|i| x.row(i)[..a.rows].to_vec())
            .collect();
        Some(Mat::from_rows(rows))
    }

    /// Solve `K * L ≡ C` with column j of the residue taken mod `mu[j]`.
    /// Columns of L are independent.
    fn solve_cols_mod(k: &Mat, c: &Mat, mu: &[Int]) -> Option<Mat> {
        let kt = k.transpose();
        let ct = c.transpose();
        let mut out_cols: Vec<Vec<Int>> = Vec::with_capacity(c.cols);
        for j in 0..c.cols {
            // transpose view: l * K^T ≡ c_j^T exactly modulo mu[j] everywhere
            let aug = if mu[j].is_zero() {
                kt.clone()
            } else {
                let mut scaled = Mat::zero(kt.rows + kt.cols, kt.cols);
                for i in 0..kt.rows {
                    for jj in 0..kt.cols {
                        scaled[(i, jj)] = kt[(i, jj)].clone();
                    }
                }
                for jj in 0..kt.cols {
                    scaled[(kt.rows + jj, jj)] = mu[j].clone();
                }
                scaled
            };
            let b = Mat::row_vec(ct.row(j).to_vec());
            let sol = solve_left(&aug, &b)?;
            out_cols.push(sol.row(0)[..k.cols].to_vec());
        }
        let mut l = Mat::zero(k.cols, c.cols);
        for (j, col) in out_cols.iter().enumerate() {
            for i in 0..k.cols {
                l[(i, j)] = col[i].clone();
            }
        }
        Some(l)
    }

    /// Generators (as rows) of the lattice `{x : x * m ∈ rowspan(rels)}`.
    fn preimage_lattice(m: &Mat, rels: &Mat) -> Mat {
        let stacked = m.stack(rels);
        let k = left_kernel_basis(&stacked);
        if k.rows == 0 {
            return Mat::zero(0, m.rows);
        }
        let rows = (0..k.rows).map(|i| k.row(i)[..m.rows].to_vec()).collect();
        Mat::from_rows(rows)
    }

    /// Present the subobject of `parent` generated (in presentation
    /// coordinates) by the rows of `gens`: returns the inclusion morphism
    /// from a freshly presented object.
    fn present_sublattice(&self, parent: &AbObject, gens: Mat) -> AbMorphism {
        // relations of the subobject: {c : c * gens ∈ rowspan(parent.rels)}
        let sub_rels = Self::preimage_lattice(&gens, &parent.rels);
        let dom = AbObject { rank: gens.rows, rels: sub_rels, canon: OnceLock::new() };
        AbMorphism { dom, cod: parent.clone(), mat: gens }
    }

    /// Canonical-form object together with the isomorphisms to and from it.
    pub fn canonical_iso(&self, x: &AbObject) -> (AbObject, AbMorphism, AbMorphism) {
        let c = x.canon();
        let keep: Vec<usize> =
            (0..x.rank).filter(|&j| !c.moduli[j].is_one()).collect();
        let k = keep.len();
        let mut rels_rows = Vec::new();
        for (i, &j) in keep.iter().enumerate() {
            if !c.moduli[j].is_zero() {
                let mut row = vec![Int::zero(); k];
                row[i] = c.moduli[j].clone();
                rels_rows.push(row);
            }
        }
        let canon_obj = AbObject {
            rank: k,
            rels: if rels_rows.is_empty() { Mat::zero(0, k) } else { Mat::from_rows(rels_rows) },
            canon: OnceLock::new(),
        };
        let mut to_mat = Mat::zero(x.rank, k);
        for i in 0..x.rank {
            for (jj, &j) in keep.iter().enumerate() {
                to_mat[(i, jj)] = c.v[(i, j)].clone();
            }
        }
        let mut from_mat = Mat::zero(k, x.rank);
        for (ii, &i) in keep.iter().enumerate() {
            for j in 0..x.rank {
                from_mat[(ii, j)] = c.v_inv[(i, j)].clone();
            }
        }
        let to = self.reduced(AbMorphism { dom: x.clone(), cod: canon_obj.clone(), mat: to_mat });
        let from = self.reduced(AbMorphism { dom: canon_obj.clone(), cod: x.clone(), mat: from_mat });
        (canon_obj, to, from)
    }

    /// All elements of a finite object, in canonical coordinates of the
    /// canonical-form object returned by `canonical_iso`.
    pub fn elements_canonical(&self, canon_obj: &AbObject, cap: usize) -> Result<Vec<Vec<Int>>> {
        let c = canon_obj.canon();
        let Some(order) = c.order() else {
            return Err(Error::BoundExceeded("object is infinite".into()));
        };
        if order > Int::from(cap) {
            return Err(Error::BoundExceeded(format!("order {order} above cap {cap}")));
        }
        let moduli: Vec<i64> = c
            .moduli
            .iter()
            .map(|m| i64::try_from(m.clone()).expect("bounded order"))
            .collect();
        let mut out = vec![vec![Int::zero(); moduli.len()]];
        for (j, &m) in moduli.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for e in &out {
                for v in 0..m {
                    let mut e2 = e.clone();
                    e2[j] = Int::from(v);
                    next.push(e2);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Difference object `D(X) = ker(fold: X + X -> X)` with its inclusion
    /// and the natural isomorphism `X -> D(X)` given by `x |-> (x, -x)`.
    pub fn difference_object(&self, x: &AbObject)
        -> (AbObject, AbMorphism, AbMorphism) {
        let (xx, _i1, _i2) = self.coproduct(x, x).expect("biproduct exists");
        let fold = AbMorphism {
            dom: xx.clone(),
            cod: x.clone(),
            mat: Mat::identity(x.rank).stack(&Mat::identity(x.rank)),
        };
        let delta = self.kernel(&fold);
        let graph = AbMorphism {
            dom: x.clone(),
            cod: xx,
            mat: Mat::identity(x.rank).hcat(&Mat::identity(x.rank).neg()),
        };
        let iso = self
            .lift_through_mono(&delta, &graph)
            .expect("(1, -1) lands in the kernel of the fold map");
        (delta.dom.clone(), delta, iso)
    }

    /// Formal difference `<f, g> . delta_X . iso`: a morphism X -> Y equal
    /// to the pointwise difference f - g.
    pub fn formal_difference(&self, f: &AbMorphism, g: &AbMorphism) -> Result<AbMorphism> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (_d, delta, iso) = self.difference_object(&f.dom);
        let copair = AbMorphism {
            dom: delta.cod.clone(),
            cod: f.cod.clone(),
            mat: f.mat.stack(&g.mat),
        };
        let through = self.compose(&copair, &self.compose(&delta, &iso)?)?;
        Ok(through)
    }
}

impl ZExact for AbCat {
    type Obj = AbObject;
    type Mor = AbMorphism;

    fn name(&self) -> &'static str {
        "ab"
    }

    fn dom(&self, f: &AbMorphism) -> AbObject {
        f.dom.clone()
    }

    fn cod(&self, f: &AbMorphism) -> AbObject {
        f.cod.clone()
    }

    fn eq_mor(&self, f: &AbMorphism, g: &AbMorphism) -> bool {
        if f.dom != g.dom || f.cod != g.cod {
            return false;
        }
        let c = f.cod.canon();
        let probe = f.mat.sub(&g.mat).mul(&c.v);
        (0..probe.rows).all(|i| {
            probe.row(i).iter().zip(&c.moduli).all(|(x, m)| {
                if m.is_zero() {
                    x.is_zero()
                } else {
                    (x % m).is_zero()
                }
            })
        })
    }

    fn identity(&self, x: &AbObject) -> AbMorphism {
        AbMorphism { dom: x.clone(), cod: x.clone(), mat: Mat::identity(x.rank) }
    }

    fn compose(&self, g: &AbMorphism, f: &AbMorphism) -> Result<AbMorphism> {
        if f.cod != g.dom {
            return Err(Error::ComposeMismatch);
        }
        Ok(self.reduced(AbMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            mat: f.mat.mul(&g.mat),
        }))
    }

    fn zero_object(&self) -> AbObject {
        AbObject::free(0)
    }

    fn is_zero_object(&self, x: &AbObject) -> bool {
        x.canon().is_trivial()
    }

    fn zero_mor(&self, x: &AbObject, y: &AbObject) -> AbMorphism {
        AbMorphism { dom: x.clone(), cod: y.clone(), mat: Mat::zero(x.rank, y.rank) }
    }

    fn is_mono(&self, f: &AbMorphism) -> bool {
        self.is_zero_object(&self.kernel(f).dom)
    }

    fn is_epi(&self, f: &AbMorphism) -> bool {
        self.is_zero_object(&self.cokernel(f).cod)
    }

    fn kernel(&self, f: &AbMorphism) -> AbMorphism {
        let gens = Self::preimage_lattice(&f.mat, &f.cod.rels);
        let raw = self.present_sublattice(&f.dom, gens);
        // re-present the kernel object in canonical form to keep ranks small
        let (_, _, from) = self.canonical_iso(&raw.dom);
        let k = self.compose(&raw, &from).expect("canonical re-presentation composes");
        self.reduced(k)
    }

    fn cokernel(&self, f: &AbMorphism) -> AbMorphism {
        let q = AbObject {
            rank: f.cod.rank,
            rels: f.cod.rels.stack(&f.mat),
            canon: OnceLock::new(),
        };
        let raw = AbMorphism { dom: f.cod.clone(), cod: q, mat: Mat::identity(f.cod.rank) };
        let (_, to, _) = self.canonical_iso(&raw.cod);
        self.compose(&to, &raw).expect("canonical re-presentation composes")
    }

    fn lift_through_mono(&self, m: &AbMorphism, g: &AbMorphism) -> Option<AbMorphism> {
        if m.cod != g.cod {
            return None;
        }
        let c = m.cod.canon();
        let a = m.mat.mul(&c.v);
        let b = g.mat.mul(&c.v);
        let x = Self::solve_rows_mod(&a, &b, &c.moduli)?;
        let lift = AbMorphism { dom: g.dom.clone(), cod: m.dom.clone(), mat: x };
        if !self.is_valid(&lift) {
            return None; // m was not monic
        }
        Some(self.reduced(lift))
    }

    fn descend_along_epi(&self, e: &AbMorphism, g: &AbMorphism) -> Option<AbMorphism> {
        if e.dom != g.dom {
            return None;
        }
        // the factorization is only unique (and the comparison semantics
        // only sound) when e is epic
        if !self.is_epi(e) {
            return None;
        }
        let cz = g.cod.canon();
        let k = e.mat.stack(&e.cod.rels);
        let c = g.mat.mul(&cz.v).stack(&Mat::zero(e.cod.rels.rows, g.cod.rank));
        let lprime = Self::solve_cols_mod(&k, &c, &cz.moduli)?;
        let mat = lprime.mul(&cz.v_inv);
        Some(self.reduced(AbMorphism { dom: e.cod.clone(), cod: g.cod.clone(), mat }))
    }

    fn product(&self, x: &AbObject, y: &AbObject) -> (AbObject, AbMorphism, AbMorphism) {
        let p = AbObject {
            rank: x.rank + y.rank,
            rels: x.rels.block_diag(&y.rels),
            canon: OnceLock::new(),
        };
        let pr1 = AbMorphism {
            dom: p.clone(),
            cod: x.clone(),
            mat: Mat::identity(x.rank).stack(&Mat::zero(y.rank, x.rank)),
        };
        let pr2 = AbMorphism {
            dom: p.clone(),
            cod: y.clone(),
            mat: Mat::zero(x.rank, y.rank).stack(&Mat::identity(y.rank)),
        };
        (p, pr1, pr2)
    }

    fn pair(&self, f: &AbMorphism, g: &AbMorphism) -> Result<AbMorphism> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.cod, &g.cod);
        Ok(self.reduced(AbMorphism { dom: f.dom.clone(), cod: p, mat: f.mat.hcat(&g.mat) }))
    }

    fn pullback(&self, f: &AbMorphism, g: &AbMorphism)
        -> Result<(AbObject, AbMorphism, AbMorphism)> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (p, pr1, pr2) = self.product(&f.dom, &g.dom);
        let span = AbMorphism {
            dom: p,
            cod: f.cod.clone(),
            mat: f.mat.stack(&g.mat.neg()),
        };
        let incl = self.kernel(&span);
        let leg1 = self.compose(&pr1, &incl)?;
        let leg2 = self.compose(&pr2, &incl)?;
        Ok((incl.dom.clone(), leg1, leg2))
    }

    fn kernel_pair(&self, f: &AbMorphism) -> (AbObject, AbMorphism, AbMorphism) {
        self.pullback(f, f).expect("kernel pair is a self-pullback")
    }

    fn coproduct(&self, x: &AbObject, y: &AbObject)
        -> Result<(AbObject, AbMorphism, AbMorphism)> {
        let (p, _, _) = self.product(x, y);
        let i1 = AbMorphism {
            dom: x.clone(),
            cod: p.clone(),
            mat: Mat::identity(x.rank).hcat(&Mat::zero(x.rank, y.rank)),
        };
        let i2 = AbMorphism {
            dom: y.clone(),
            cod: p.clone(),
            mat: Mat::zero(y.rank, x.rank).hcat(&Mat::identity(y.rank)),
        };
        Ok((p, i1, i2))
    }

    fn copair(&self, f: &AbMorphism, g: &AbMorphism) -> Result<AbMorphism> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.dom, &g.dom);
        Ok(self.reduced(AbMorphism { dom: p, cod: f.cod.clone(), mat: f.mat.stack(&g.mat) }))
    }

    fn pushout(&self, f: &AbMorphism, g: &AbMorphism)
        -> Result<(AbObject, AbMorphism, AbMorphism)> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let span = self.pair(f, &self.neg_mor(g))?;
        let q = self.cokernel(&span);
        let (_, i1, i2) = self.coproduct(&f.cod, &g.cod)?;
        let l1 = self.compose(&q, &i1)?;
        let l2 = self.compose(&q, &i2)?;
        Ok((q.cod.clone(), l1, l2))
    }

    fn add_mor(&self, f: &AbMorphism, g: &AbMorphism) -> Result<AbMorphism> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        Ok(self.reduced(AbMorphism {
            dom: f.dom.clone(),
            cod: f.cod.clone(),
            mat: f.mat.add(&g.mat),
        }))
    }

    fn is_cmon_enriched(&self) -> bool {
        true
    }

    fn is_homological(&self) -> bool {
        true
    }

    fn image_subobject(&self, f: &AbMorphism) -> AbMorphism {
        // every morphism is normal here, so the image is ker(coker(f))
        self.kernel(&self.cokernel(f))
    }

    fn join_subobjects(&self, m: &AbMorphism, n: &AbMorphism) -> Result<AbMorphism> {
        if m.cod != n.cod {
            return Err(Error::ComposeMismatch);
        }
        let u = self.copair(m, n)?;
        Ok(self.image_subobject(&u))
    }

    fn enumerate_subobjects(&self, x: &AbObject) -> Result<Vec<AbMorphism>> {
        let (canon_obj, _to, from) = self.canonical_iso(x);
        let elems = self.elements_canonical(&canon_obj, 4096)?;
        let c = canon_obj.canon();
        let add = |a: &Vec<Int>, b: &Vec<Int>| -> Vec<Int> {
            c.reduce_row(
                &a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<Int>>(),
            )
        };
        // grow subgroups one generator at a time to a fixed point
        let closure = |gens: &Vec<Vec<Int>>| -> Vec<Vec<Int>> {
            let mut set: std::collections::BTreeSet<Vec<Int>> = Default::default();
            set.insert(vec![Int::zero(); canon_obj.rank]);
            let mut frontier: Vec<Vec<Int>> = vec![vec![Int::zero(); canon_obj.rank]];
            for g in gens {
                if set.insert(g.clone()) {
                    frontier.push(g.clone());
                }
            }
            while let Some(a) = frontier.pop() {
                let snapshot: Vec<Vec<Int>> = set.iter().cloned().collect();
                for b in snapshot {
                    let s = add(&a, &b);
                    if set.insert(s.clone()) {
                        frontier.push(s);
                    }
                }
            }
            set.into_iter().collect()
        };
        let mut found: Vec<Vec<Vec<Int>>> = vec![closure(&vec![])];
        let mut frontier = found.clone();
        while let Some(h) = frontier.pop() {
            for e in &elems {
                if h.binary_search(e).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(e.clone());
                let s = closure(&gens);
                if !found.contains(&s) {
                    found.push(s.clone());
                    frontier.push(s);
                }
            }
        }
        found.sort();
        let mut out = Vec::new();
        for carrier in found {
            // present the subgroup via the image of a free cover of its gens
            let gen_rows: Vec<Vec<Int>> =
                carrier.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
            let gens_mat = if gen_rows.is_empty() {
                Mat::zero(0, canon_obj.rank)
            } else {
                Mat::from_rows(gen_rows)
            };
            let cover = AbMorphism {
                dom: AbObject::free(gens_mat.rows),
                cod: canon_obj.clone(),
                mat: gens_mat,
            };
            let sub_in_canon = self.image_subobject(&cover);
            let incl = self.compose(&from, &sub_in_canon)?;
            out.push(incl);
        }
        Ok(out)
    }

    fn enumerate_normal_subobjects(&self, x: &AbObject) -> Result<Vec<AbMorphism>> {
        self.enumerate_subobjects(x)
    }

    fn enumerate_homs(&self, x: &AbObject, y: &AbObject, cap: usize)
        -> Result<Vec<AbMorphism>> {
        let (cx, tox, _fromx) = self.canonical_iso(x);
        let (cy, _toy, fromy) = self.canonical_iso(y);
        if cx.canon().free_rank() > 0 && !cy.canon().is_finite() {
            return Err(Error::BoundExceeded("hom set is infinite".into()));
        }
        let ys = self.elements_canonical(&cy, cap)?;
        let mx = &cx.canon().moduli;
        let my = &cy.canon().moduli;
        // candidate images per generator: a * v == 0 in y
        let mut candidates: Vec<Vec<Vec<Int>>> = Vec::new();
        for a in mx {
            let cands: Vec<Vec<Int>> = ys
                .iter()
                .filter(|v| {
                    v.iter().zip(my).all(|(vi, m)| {
                        let av = a * vi;
                        if m.is_zero() { av.is_zero() } else { (&av % m).is_zero() }
                    })
                })
                .cloned()
                .collect();
            candidates.push(cands);
        }
        let total: usize = candidates.iter().map(|c| c.len()).product();
        if total > cap {
            return Err(Error::BoundExceeded(format!("{total} candidate homs")));
        }
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; candidates.len()];
        loop {
            let rows: Vec<Vec<Int>> =
                idx.iter().enumerate().map(|(i, &k)| candidates[i][k].clone()).collect();
            let cmat = if rows.is_empty() {
                Mat::zero(0, cy.rank)
            } else {
                Mat::from_rows(rows)
            };
            let canon_mor = AbMorphism { dom: cx.clone(), cod: cy.clone(), mat: cmat };
            let full = self
                .compose(&canon_mor, &tox)
                .and_then(|h| self.compose(&fromy, &h))
                .expect("transport along canonical isos");
            out.push(full);
            let mut i = candidates.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < candidates[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn find_retraction(&self, m: &AbMorphism) -> Option<AbMorphism> {
        if !self.is_mono(m) {
            return None;
        }
        // r with r . m = id and r a valid morphism; one bilinear solve
        solve_constraints(
            m.cod.rank,
            m.dom.rank,
            &[
                ConstraintSpec {
                    left: m.mat.clone(),
                    right: Mat::identity(m.dom.rank),
                    target: &m.dom,
                    rhs: Mat::identity(m.dom.rank),
                },
                ConstraintSpec {
                    left: m.cod.rels.clone(),
                    right: Mat::identity(m.dom.rank),
                    target: &m.dom,
                    rhs: Mat::zero(m.cod.rels.rows, m.dom.rank),
                },
            ],
        )
        .map(|mat| AbMorphism { dom: m.cod.clone(), cod: m.dom.clone(), mat })
    }

    fn find_section(&self, e: &AbMorphism) -> Option<AbMorphism> {
        // s with e . s = id (matrix form M_s * M_e ≡ I) and s valid
        solve_constraints(
            e.cod.rank,
            e.dom.rank,
            &[
                ConstraintSpec {
                    left: Mat::identity(e.cod.rank),
                    right: e.mat.clone(),
                    target: &e.cod,
                    rhs: Mat::identity(e.cod.rank),
                },
                ConstraintSpec {
                    left: e.cod.rels.clone(),
                    right: Mat::identity(e.dom.rank),
                    target: &e.dom,
                    rhs: Mat::zero(e.cod.rels.rows, e.dom.rank),
                },
            ],
        )
        .map(|mat| AbMorphism { dom: e.cod.clone(), cod: e.dom.clone(), mat })
    }

    fn object_label(&self, x: &AbObject) -> String {
        x.label()
    }
}

/// One constraint `left * X * right ≡ rhs`, the congruence taken in the
/// canonical coordinates of `target` (rhs is in its presentation
/// coordinates).
struct ConstraintSpec<'a> {
    left: Mat,
    right: Mat,
    target: &'a AbObject,
    rhs: Mat,
}

/// Solve for an integer matrix X (p x q) satisfying every bilinear
/// congruence constraint, by vectorizing into a single integer system.
fn solve_constraints(p: usize, q: usize, constraints: &[ConstraintSpec<'_>]) -> Option<Mat> {
    let var = |r: usize, c: usize| r * q + c;
    let nx = p * q;
    let mut eqs: Vec<(Vec<(usize, Int)>, Int, Option<Int>)> = Vec::new();
    for spec in constraints {
        let canon = spec.target.canon();
        let l = &spec.left;
        let rv = spec.right.mul(&canon.v); // q x target.rank
        let b = spec.rhs.mul(&canon.v);
        // equation (k, j): sum_{r,c} L[k,r] X[r,c] RV[c,j] ≡ B[k,j] mod mu[j]
        for k in 0..l.rows {
            for j in 0..spec.target.rank {
                let mut terms: Vec<(usize, Int)> = Vec::new();
                for r in 0..p {
                    if l[(k, r)].is_zero() {
                        continue;
                    }
                    for c in 0..q {
                        let coeff = &l[(k, r)] * &rv[(c, j)];
                        if !coeff.is_zero() {
                            terms.push((var(r, c), coeff));
                        }
                    }
                }
                let modulus = if canon.moduli[j].is_zero() {
                    None
                } else {
                    Some(canon.moduli[j].clone())
                };
                eqs.push((terms, b[(k, j)].clone(), modulus));
            }
        }
    }
    let slack_cols = eqs.iter().filter(|(_, _, m)| m.is_some()).count();
    let ncols = nx + slack_cols;
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut rhs: Vec<Int> = Vec::new();
    let mut slack_at = nx;
    for (terms, b, m) in eqs {
        let mut row = vec![Int::zero(); ncols];
        for (v, c) in terms {
            row[v] += c;
        }
        if let Some(mu) = m {
            row[slack_at] = mu;
            slack_at += 1;
        }
        rows.push(row);
        rhs.push(b);
    }
    if rows.is_empty() {
        return Some(Mat::zero(p, q));
    }
    let a = Mat::from_rows(rows); // equations x variables
    let sol = solve_left(&a.transpose(), &Mat::row_vec(rhs))?;
    let mut x = Mat::zero(p, q);
    for r in 0..p {
        for c in 0..q {
            x[(r, c)] = sol[(0, var(r, c))].clone();
        }
    }
    Some(x)
}

/// Extension enumeration: all short exact sequences K >-> X ->> Q with
/// |X| = |K| * |Q|, grouped by the equivalence (1_K, u, 1_Q).
pub struct ExtClasses {
    pub count: usize,
    /// one (k, q) representative per class
    pub representatives: Vec<(AbMorphism, AbMorphism)>,
}

pub fn ext_classes(cat: &AbCat, q_obj: &AbObject, k_obj: &AbObject, cap: usize)
    -> Result<ExtClasses> {
    let k_can = k_obj.canon();
    let q_can = q_obj.canon();
    let (Some(k_ord), Some(q_ord)) = (k_can.order(), q_can.order()) else {
        return Err(Error::Precondition("ext_classes requires finite arguments".into()));
    };
    let total = &k_ord * &q_ord;
    if total > Int::from(cap) {
        return Err(Error::BoundExceeded(format!(
            "middle order {total} above configured cap {cap}"
        )));
    }
    let total_usize = usize::try_from(total.clone()).expect("capped");
    let mut class_reps: Vec<(AbMorphism, AbMorphism)> = Vec::new();
    let mut count = 0usize;
    for factors in crate::fingrp::catalog::abelian_factorizations(total_usize) {
        let torsion: Vec<i64> = factors.iter().map(|&f| f as i64).collect();
        let middle = AbObject::from_factors(&torsion, 0);
        let injs: Vec<AbMorphism> = cat
            .enumerate_homs(k_obj, &middle, 1_000_000)?
            .into_iter()
            .filter(|h| cat.is_mono(h))
            .collect();
        let surjs: Vec<AbMorphism> = cat
            .enumerate_homs(&middle, q_obj, 1_000_000)?
            .into_iter()
            .filter(|h| cat.is_epi(h))
            .collect();
        let autos: Vec<AbMorphism> = cat
            .enumerate_homs(&middle, &middle, 1_000_000)?
            .into_iter()
            .filter(|h| crate::zexact::iso_check(cat, h))
            .collect();
        let mut sess: Vec<(AbMorphism, AbMorphism)> = Vec::new();
        for k in &injs {
            for q in &surjs {
                let comp = cat.compose(q, k)?;
                if !cat.eq_mor(&comp, &cat.zero_mor(k_obj, q_obj)) {
                    continue;
                }
                // orders match, im k <= ker q, so the sequence is exact
                sess.push((k.clone(), q.clone()));
            }
        }
        let mut assigned = vec![false; sess.len()];
        for i in 0..sess.len() {
            if assigned[i] {
                continue;
            }
            assigned[i] = true;
            count += 1;
            class_reps.push(sess[i].clone());
            for j in (i + 1)..sess.len() {
                if assigned[j] {
                    continue;
                }
                let equivalent = autos.iter().any(|u| {
                    let uk = cat.compose(u, &sess[i].0).expect("compose");
                    let qu = cat.compose(&sess[j].1, u).expect("compose");
                    cat.eq_mor(&uk, &sess[j].0) && cat.eq_mor(&qu, &sess[i].1)
                });
                if equivalent {
                    assigned[j] = true;
                }
            }
        }
    }
    Ok(ExtClasses { count, representatives: class_reps })
}
