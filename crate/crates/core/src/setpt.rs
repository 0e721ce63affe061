//! Finite pointed sets. Elements are indices `0..size` with the basepoint
//! fixed at index 0; quotient carriers use minimal-index representatives and
//! all enumeration is lexicographic.

use crate::error::{Error, Result};
use crate::zexact::ZExact;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointedSet {
    pub size: usize,
}

impl PointedSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Validation("pointed set must have size >= 1".into()));
        }
        Ok(PointedSet { size })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedMap {
    pub dom: PointedSet,
    pub cod: PointedSet,
    pub table: Vec<usize>,
}

impl PointedMap {
    pub fn new(dom: PointedSet, cod: PointedSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::Validation("map table length differs from domain size".into()));
        }
        if table.first() != Some(&0) {
            return Err(Error::Validation("map must preserve the basepoint".into()));
        }
        if table.iter().any(|&v| v >= cod.size) {
            return Err(Error::Validation("map table entry out of codomain range".into()));
        }
        Ok(PointedMap { dom, cod, table })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SetPt;

/// Canonical injection of a sorted subset (containing 0) into its parent.
fn subset_inclusion(carrier: &[usize], parent: PointedSet) -> PointedMap {
    debug_assert!(carrier.first() == Some(&0));
    debug_assert!(carrier.windows(2).all(|w| w[0] < w[1]));
    PointedMap {
        dom: PointedSet { size: carrier.len() },
        cod: parent,
        table: carrier.to_vec(),
    }
}

/// Canonical collapse of a subset (containing 0) of X to the basepoint.
/// Non-members keep their relative order, renumbered from 1.
fn collapse_subset(members: &[bool], x: PointedSet) -> PointedMap {
    let mut table = vec![0usize; x.size];
    let mut next = 1;
    for i in 0..x.size {
        if !members[i] {
            table[i] = next;
            next += 1;
        }
    }
    PointedMap { dom: x, cod: PointedSet { size: next }, table }
}

impl SetPt {
    pub fn pair_index(&self, x: PointedSet, y: PointedSet, i: usize, j: usize) -> usize {
        debug_assert!(i < x.size && j < y.size);
        i * y.size + j
    }

    /// Wedge (1-point union): X keeps its indices, nonbase elements of Y
    /// follow.
    pub fn wedge(&self, x: PointedSet, y: PointedSet) -> (PointedSet, PointedMap, PointedMap) {
        let w = PointedSet { size: x.size + y.size - 1 };
        let i1 = PointedMap { dom: x, cod: w, table: (0..x.size).collect() };
        let mut t2 = vec![0usize];
        t2.extend((1..y.size).map(|j| x.size + j - 1));
        let i2 = PointedMap { dom: y, cod: w, table: t2 };
        (w, i1, i2)
    }
}

impl ZExact for SetPt {
    type Obj = PointedSet;
    type Mor = PointedMap;

    fn name(&self) -> &'static str {
        "setpt"
    }

    fn dom(&self, f: &PointedMap) -> PointedSet {
        f.dom
    }

    fn cod(&self, f: &PointedMap) -> PointedSet {
        f.cod
    }

    fn eq_mor(&self, f: &PointedMap, g: &PointedMap) -> bool {
        f == g
    }

    fn identity(&self, x: &PointedSet) -> PointedMap {
        PointedMap { dom: *x, cod: *x, table: (0..x.size).collect() }
    }

    fn compose(&self, g: &PointedMap, f: &PointedMap) -> Result<PointedMap> {
        if f.cod != g.dom {
            return Err(Error::ComposeMismatch);
        }
        Ok(PointedMap {
            dom: f.dom,
            cod: g.cod,
            table: f.table.iter().map(|&v| g.table[v]).collect(),
        })
    }

    fn zero_object(&self) -> PointedSet {
        PointedSet { size: 1 }
    }

    fn is_zero_object(&self, x: &PointedSet) -> bool {
        x.size == 1
    }

    fn zero_mor(&self, x: &PointedSet, y: &PointedSet) -> PointedMap {
        PointedMap { dom: *x, cod: *y, table: vec![0; x.size] }
    }

    fn is_mono(&self, f: &PointedMap) -> bool {
        let mut seen = vec![false; f.cod.size];
        f.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    fn is_epi(&self, f: &PointedMap) -> bool {
        let mut seen = vec![false; f.cod.size];
        for &v in &f.table {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }

    fn kernel(&self, f: &PointedMap) -> PointedMap {
        let carrier: Vec<usize> =
            (0..f.dom.size).filter(|&i| f.table[i] == 0).collect();
        subset_inclusion(&carrier, f.dom)
    }

    fn cokernel(&self, f: &PointedMap) -> PointedMap {
        let mut in_image = vec![false; f.cod.size];
        in_image[0] = true;
        for &v in &f.table {
            in_image[v] = true;
        }
        collapse_subset(&in_image, f.cod)
    }

    fn lift_through_mono(&self, m: &PointedMap, g: &PointedMap) -> Option<PointedMap> {
        if m.cod != g.cod {
            return None;
        }
        let mut preimage = vec![usize::MAX; m.cod.size];
        for (i, &v) in m.table.iter().enumerate() {
            if preimage[v] != usize::MAX {
                return None; // not monic
            }
            preimage[v] = i;
        }
        let mut table = Vec::with_capacity(g.dom.size);
        for &v in &g.table {
            if preimage[v] == usize::MAX {
                return None;
            }
            table.push(preimage[v]);
        }
        Some(PointedMap { dom: g.dom, cod: m.dom, table })
    }

    fn descend_along_epi(&self, e: &PointedMap, g: &PointedMap) -> Option<PointedMap> {
        if e.dom != g.dom {
            return None;
        }
        let mut table = vec![usize::MAX; e.cod.size];
        for i in 0..e.dom.size {
            let q = e.table[i];
            if table[q] == usize::MAX {
                table[q] = g.table[i];
            } else if table[q] != g.table[i] {
                return None; // g not constant on a fiber
            }
        }
        if table.iter().any(|&v| v == usize::MAX) {
            return None; // e not surjective
        }
        Some(PointedMap { dom: e.cod, cod: g.cod, table })
    }

    fn product(&self, x: &PointedSet, y: &PointedSet) -> (PointedSet, PointedMap, PointedMap) {
        let p = PointedSet { size: x.size * y.size };
        let mut t1 = Vec::with_capacity(p.size);
        let mut t2 = Vec::with_capacity(p.size);
        for i in 0..x.size {
            for j in 0..y.size {
                t1.push(i);
                t2.push(j);
            }
        }
        (
            p,
            PointedMap { dom: p, cod: *x, table: t1 },
            PointedMap { dom: p, cod: *y, table: t2 },
        )
    }

    fn pair(&self, f: &PointedMap, g: &PointedMap) -> Result<PointedMap> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.cod, &g.cod);
        let table = (0..f.dom.size)
            .map(|t| self.pair_index(f.cod, g.cod, f.table[t], g.table[t]))
            .collect();
        Ok(PointedMap { dom: f.dom, cod: p, table })
    }

    fn pullback(&self, f: &PointedMap, g: &PointedMap)
        -> Result<(PointedSet, PointedMap, PointedMap)> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for i in 0..f.dom.size {
            for j in 0..g.dom.size {
                if f.table[i] == g.table[j] {
                    t1.push(i);
                    t2.push(j);
                }
            }
        }
        let p = PointedSet { size: t1.len() };
        Ok((
            p,
            PointedMap { dom: p, cod: f.dom, table: t1 },
            PointedMap { dom: p, cod: g.dom, table: t2 },
        ))
    }

    fn kernel_pair(&self, f: &PointedMap) -> (PointedSet, PointedMap, PointedMap) {
        self.pullback(f, f).expect("kernel pair is a self-pullback")
    }

    fn coproduct(&self, x: &PointedSet, y: &PointedSet)
        -> Result<(PointedSet, PointedMap, PointedMap)> {
        Ok(self.wedge(*x, *y))
    }

    fn copair(&self, f: &PointedMap, g: &PointedMap) -> Result<PointedMap> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (w, _, _) = self.wedge(f.dom, g.dom);
        let mut table = f.table.clone();
        table.extend(g.table.iter().skip(1));
        Ok(PointedMap { dom: w, cod: f.cod, table })
    }

    fn pushout(&self, f: &PointedMap, g: &PointedMap)
        -> Result<(PointedSet, PointedMap, PointedMap)> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (w, i1, i2) = self.wedge(f.cod, g.cod);
        // Identify i1(f(z)) with i2(g(z)) by union-find, then relabel classes
        // by minimal representative.
        let mut parent: Vec<usize> = (0..w.size).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for z in 0..f.dom.size {
            let a = find(&mut parent, i1.table[f.table[z]]);
            let b = find(&mut parent, i2.table[g.table[z]]);
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
        let mut rep_of = vec![usize::MAX; w.size];
        let mut label = vec![usize::MAX; w.size];
        let mut next = 0;
        for v in 0..w.size {
            let r = find(&mut parent, v);
            if rep_of[r] == usize::MAX {
                rep_of[r] = next;
                next += 1;
            }
            label[v] = rep_of[r];
        }
        let p = PointedSet { size: next };
        let l1 = PointedMap {
            dom: f.cod,
            cod: p,
            table: i1.table.iter().map(|&v| label[v]).collect(),
        };
        let l2 = PointedMap {
            dom: g.cod,
            cod: p,
            table: i2.table.iter().map(|&v| label[v]).collect(),
        };
        Ok((p, l1, l2))
    }

    fn add_mor(&self, _f: &PointedMap, _g: &PointedMap) -> Result<PointedMap> {
        Err(Error::Unsupported("Set_* is not CMon-enriched".into()))
    }

    fn image_subobject(&self, f: &PointedMap) -> PointedMap {
        let mut in_image = vec![false; f.cod.size];
        in_image[0] = true;
        for &v in &f.table {
            in_image[v] = true;
        }
        let carrier: Vec<usize> = (0..f.cod.size).filter(|&i| in_image[i]).collect();
        subset_inclusion(&carrier, f.cod)
    }

    fn join_subobjects(&self, m: &PointedMap, n: &PointedMap) -> Result<PointedMap> {
        if m.cod != n.cod {
            return Err(Error::ComposeMismatch);
        }
        let union = self.copair(m, n)?;
        Ok(self.image_subobject(&union))
    }

    fn meet_subobjects(&self, m: &PointedMap, n: &PointedMap) -> Result<PointedMap> {
        if m.cod != n.cod {
            return Err(Error::ComposeMismatch);
        }
        let in_n = {
            let mut v = vec![false; m.cod.size];
            for &x in &n.table {
                v[x] = true;
            }
            v
        };
        let carrier: Vec<usize> =
            m.table.iter().copied().filter(|&x| in_n[x]).collect();
        let mut carrier = carrier;
        carrier.sort_unstable();
        Ok(subset_inclusion(&carrier, m.cod))
    }

    fn enumerate_subobjects(&self, x: &PointedSet) -> Result<Vec<PointedMap>> {
        if x.size > 13 {
            return Err(Error::BoundExceeded(format!(
                "subobject enumeration over 2^{} subsets",
                x.size - 1
            )));
        }
        let mut out = Vec::new();
        let free = x.size - 1;
        for mask in 0..(1usize << free) {
            let mut carrier = vec![0usize];
            for b in 0..free {
                if mask & (1 << b) != 0 {
                    carrier.push(b + 1);
                }
            }
            out.push(subset_inclusion(&carrier, *x));
        }
        Ok(out)
    }

    fn enumerate_normal_subobjects(&self, x: &PointedSet) -> Result<Vec<PointedMap>> {
        // Normal monos in Set_* are exactly the injections (Ex 1.4.24(ii)).
        self.enumerate_subobjects(x)
    }

    fn enumerate_homs(&self, x: &PointedSet, y: &PointedSet, cap: usize)
        -> Result<Vec<PointedMap>> {
        let free = x.size - 1;
        let count = y.size.checked_pow(free as u32).unwrap_or(usize::MAX);
        if count > cap {
            return Err(Error::BoundExceeded(format!("{count} candidate maps")));
        }
        let mut out = Vec::with_capacity(count);
        let mut table = vec![0usize; x.size];
        loop {
            out.push(PointedMap { dom: *x, cod: *y, table: table.clone() });
            // lexicographic increment over positions 1..size
            let mut i = x.size;
            loop {
                if i == 1 {
                    return Ok(out);
                }
                i -= 1;
                table[i] += 1;
                if table[i] < y.size {
                    break;
                }
                table[i] = 0;
            }
        }
    }

    fn find_retraction(&self, m: &PointedMap) -> Option<PointedMap> {
        if !self.is_mono(m) {
            return None;
        }
        // Collapse everything outside the image to the basepoint.
        let mut table = vec![0usize; m.cod.size];
        for (i, &v) in m.table.iter().enumerate() {
            table[v] = i;
        }
        Some(PointedMap { dom: m.cod, cod: m.dom, table })
    }

    fn find_section(&self, e: &PointedMap) -> Option<PointedMap> {
        if !self.is_epi(e) {
            return None;
        }
        let mut sec = vec![usize::MAX; e.cod.size];
        for i in (0..e.dom.size).rev() {
            sec[e.table[i]] = i; // lowest preimage wins
        }
        sec[0] = 0;
        Some(PointedMap { dom: e.cod, cod: e.dom, table: sec })
    }

    fn object_label(&self, x: &PointedSet) -> String {
        format!("setpt({})", x.size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zexact::{self, subobject_eq};

    // f: {*,a,b} -> {*,q}, f(a) = *, f(b) = q.
    fn paper_example_map() -> PointedMap {
        PointedMap::new(PointedSet { size: 3 }, PointedSet { size: 2 }, vec![0, 0, 1]).unwrap()
    }

    #[test]
    fn kernel_is_fiber_of_basepoint() {
        let c = SetPt;
        let f = paper_example_map();
        let k = c.kernel(&f);
        // kernel carrier {*, a}: inclusion table [0, 1]
        assert_eq!(k.dom.size, 2);
        assert_eq!(k.table, vec![0, 1]);
    }

    #[test]
    fn cokernel_collapses_image() {
        let c = SetPt;
        // incl {*,a} into {*,a,b}
        let incl =
            PointedMap::new(PointedSet { size: 2 }, PointedSet { size: 3 }, vec![0, 1]).unwrap();
        let q = c.cokernel(&incl);
        // collapse a: {*,a,b} -> {*,b}
        assert_eq!(q.cod.size, 2);
        assert_eq!(q.table, vec![0, 0, 1]);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let c = SetPt;
        let x = PointedSet { size: 4 };
        let k = c.kernel(&c.identity(&x));
        assert!(c.is_zero_object(&k.dom));
    }

    #[test]
    fn cokernel_of_zero_into_x_is_identity() {
        let c = SetPt;
        let x = PointedSet { size: 4 };
        let z = c.zero_mor(&c.zero_object(), &x);
        let q = c.cokernel(&z);
        assert!(zexact::iso_check(&c, &q));
        assert_eq!(q.cod.size, x.size);
    }

    #[test]
    fn normal_mono_iff_injective_normal_epi_iff_singleton_fibers() {
        let c = SetPt;
        let inj =
            PointedMap::new(PointedSet { size: 2 }, PointedSet { size: 3 }, vec![0, 2]).unwrap();
        assert!(zexact::is_normal_mono(&c, &inj).unwrap());

        // surjection with a 2-element non-basepoint fiber: not a normal epi
        let f = PointedMap::new(PointedSet { size: 3 }, PointedSet { size: 2 }, vec![0, 1, 1])
            .unwrap();
        assert!(c.is_epi(&f));
        assert!(!zexact::is_normal_epi(&c, &f));

        // collapse map: fibers over non-basepoints are singletons
        let g = paper_example_map();
        assert!(zexact::is_normal_epi(&c, &g));
    }

    #[test]
    fn wedge_with_zero_is_neutral() {
        let c = SetPt;
        let x = PointedSet { size: 3 };
        let (w, _i1, i2) = c.wedge(c.zero_object(), x);
        assert_eq!(w.size, x.size);
        assert!(zexact::iso_check(&c, &i2));
    }

    #[test]
    fn pullback_enumerates_fiber_product() {
        let c = SetPt;
        let two = PointedSet { size: 2 };
        let three = PointedSet { size: 3 };
        let f = PointedMap::new(three, two, vec![0, 1, 1]).unwrap();
        let g = PointedMap::new(two, two, vec![0, 1]).unwrap();
        let (p, p1, p2) = c.pullback(&f, &g).unwrap();
        assert_eq!(p.size, 3); // (0,0), (1,1), (2,1)
        let lhs = c.compose(&f, &p1).unwrap();
        let rhs = c.compose(&g, &p2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_is_split_mono() {
        let c = SetPt;
        for (xs, ys) in [(2, 2), (3, 2), (1, 4)] {
            let x = PointedSet { size: xs };
            let y = PointedSet { size: ys };
            let g = zexact::gamma_comparison(&c, &x, &y).unwrap();
            assert!(c.is_mono(&g));
            let r = c.find_retraction(&g).unwrap();
            let rg = c.compose(&r, &g).unwrap();
            assert!(c.eq_mor(&rg, &c.identity(&c.dom(&g))));
            if xs == 1 {
                assert!(zexact::iso_check(&c, &g));
            }
        }
    }

    #[test]
    fn image_subobject_is_least_upper_bound_carrier() {
        let c = SetPt;
        let f = paper_example_map();
        let im = c.image_subobject(&f);
        assert_eq!(im.dom.size, 2);
        let k = c.kernel(&c.cokernel(&f));
        assert!(subobject_eq(&c, &im, &k)); // in Set_* image = normal closure of image
    }
}
