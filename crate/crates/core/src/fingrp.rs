//! Finite groups presented by Cayley tables. Unit at index 0; group axioms
//! are validated eagerly. Subgroup carriers are sorted element sets, quotient
//! groups use minimal coset representatives, and isomorphism testing is
//! brute-force over generator images.

use crate::error::{Error, Result};
use crate::zexact::ZExact;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinGroup {
    pub size: usize,
    /// op[i][j] = i * j
    pub op: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

impl FinGroup {
    pub fn new(op: Vec<Vec<usize>>) -> Result<Self> {
        let n = op.len();
        if n == 0 {
            return Err(Error::Validation("group table is empty".into()));
        }
        if op.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("group table is not square".into()));
        }
        if op.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Validation("group table entry out of range".into()));
        }
        for i in 0..n {
            if op[0][i] != i || op[i][0] != i {
                return Err(Error::Validation("index 0 is not a two-sided unit".into()));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if op[i][j] == 0 {
                    if op[j][i] != 0 {
                        return Err(Error::Validation("one-sided inverse".into()));
                    }
                    inv[i] = j;
                }
            }
            if inv[i] == usize::MAX {
                return Err(Error::Validation(format!("element {i} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if op[op[a][b]][c] != op[a][op[b][c]] {
                        return Err(Error::Validation("associativity fails".into()));
                    }
                }
            }
        }
        Ok(FinGroup { size: n, op, inv })
    }

    /// Fast constructor for tables produced by internal constructions that
    /// are groups by construction (products, subgroups, coset quotients).
    fn assemble(op: Vec<Vec<usize>>) -> Self {
        let n = op.len();
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if op[i][j] == 0 {
                    inv[i] = j;
                }
            }
        }
        debug_assert!(inv.iter().all(|&v| v != usize::MAX));
        FinGroup { size: n, op, inv }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.op[a][b]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv[g])
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.op[a][b] == self.op[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Closure of a subset under multiplication and inverses; sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.size];
        in_set[0] = true;
        let mut stack: Vec<usize> = vec![0];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                stack.push(g);
            }
        }
        let mut members = stack.clone();
        while let Some(a) = stack.pop() {
            let push = |v: usize, in_set: &mut Vec<bool>, stack: &mut Vec<usize>,
                            members: &mut Vec<usize>| {
                if !in_set[v] {
                    in_set[v] = true;
                    stack.push(v);
                    members.push(v);
                }
            };
            push(self.inv[a], &mut in_set, &mut stack, &mut members);
            let snapshot: Vec<usize> = members.clone();
            for &b in &snapshot {
                push(self.mul(a, b), &mut in_set, &mut stack, &mut members);
                push(self.mul(b, a), &mut in_set, &mut stack, &mut members);
            }
        }
        members.sort_unstable();
        members
    }

    pub fn is_subgroup_carrier(&self, carrier: &[usize]) -> bool {
        if carrier.first() != Some(&0) {
            return false;
        }
        let in_set = {
            let mut v = vec![false; self.size];
            for &x in carrier {
                v[x] = true;
            }
            v
        };
        carrier.iter().all(|&a| {
            in_set[self.inv[a]] && carrier.iter().all(|&b| in_set[self.mul(a, b)])
        })
    }

    pub fn is_normal_carrier(&self, carrier: &[usize]) -> bool {
        let in_set = {
            let mut v = vec![false; self.size];
            for &x in carrier {
                v[x] = true;
            }
            v
        };
        (0..self.size).all(|g| carrier.iter().all(|&x| in_set[self.conj(g, x)]))
    }

    /// Least normal subgroup containing the given subset: conjugation closure
    /// iterated with subgroup closure to a fixed point.
    pub fn normal_closure_of(&self, gens: &[usize]) -> Vec<usize> {
        let mut current = self.subgroup_closure(gens);
        loop {
            let mut extended: Vec<usize> = current.clone();
            for g in 0..self.size {
                for &x in &current {
                    extended.push(self.conj(g, x));
                }
            }
            extended.sort_unstable();
            extended.dedup();
            let next = self.subgroup_closure(&extended);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// All subgroups, by closing generator subsets of bounded size.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        while let Some(h) = frontier.pop() {
            for g in 1..self.size {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens: Vec<usize> = h.clone();
                gens.push(g);
                let s = self.subgroup_closure(&gens);
                if !found.contains(&s) {
                    found.push(s.clone());
                    frontier.push(s);
                }
            }
        }
        found.sort();
        found
    }

    pub fn all_normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.all_subgroups()
            .into_iter()
            .filter(|s| self.is_normal_carrier(s))
            .collect()
    }

    /// Subgroup as its own group, with the inclusion table.
    pub fn subgroup_object(&self, carrier: &[usize]) -> (FinGroup, Vec<usize>) {
        let index_of = {
            let mut m = vec![usize::MAX; self.size];
            for (i, &x) in carrier.iter().enumerate() {
                m[x] = i;
            }
            m
        };
        let n = carrier.len();
        let mut op = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                op[i][j] = index_of[self.mul(carrier[i], carrier[j])];
            }
        }
        let g = FinGroup::assemble(op);
        (g, carrier.to_vec())
    }

    /// Quotient by a normal subgroup: cosets labeled by minimal
    /// representative order, projection table included.
    pub fn quotient_by(&self, normal: &[usize]) -> (FinGroup, Vec<usize>) {
        debug_assert!(self.is_subgroup_carrier(normal) && self.is_normal_carrier(normal));
        let mut coset_of = vec![usize::MAX; self.size];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..self.size {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let label = reps.len();
            reps.push(x);
            for &nrm in normal {
                coset_of[self.mul(x, nrm)] = label;
            }
        }
        let k = reps.len();
        let mut op = vec![vec![0usize; k]; k];
        for a in 0..k {
            for b in 0..k {
                op[a][b] = coset_of[self.mul(reps[a], reps[b])];
            }
        }
        let q = FinGroup::assemble(op);
        (q, coset_of)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    pub dom: FinGroup,
    pub cod: FinGroup,
    pub table: Vec<usize>,
}

impl GroupHom {
    pub fn new(dom: FinGroup, cod: FinGroup, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::Validation("hom table length differs from domain".into()));
        }
        if table.iter().any(|&v| v >= cod.size) {
            return Err(Error::Validation("hom table entry out of range".into()));
        }
        for a in 0..dom.size {
            for b in 0..dom.size {
                if table[dom.op[a][b]] != cod.op[table[a]][table[b]] {
                    return Err(Error::Validation("not a group homomorphism".into()));
                }
            }
        }
        Ok(GroupHom { dom, cod, table })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Grp;

impl Grp {
    fn image_carrier(&self, f: &GroupHom) -> Vec<usize> {
        let mut seen = vec![false; f.cod.size];
        for &v in &f.table {
            seen[v] = true;
        }
        (0..f.cod.size).filter(|&i| seen[i]).collect()
    }

    /// Two subgroups commute elementwise iff the map
    /// `(h, k) |-> h . k` is a homomorphism `H x K -> G`; returns it when so.
    pub fn commuting_subobjects(&self, h: &GroupHom, k: &GroupHom)
        -> crate::error::Result<Option<GroupHom>> {
        if h.cod != k.cod {
            return Err(Error::ComposeMismatch);
        }
        if !self.is_mono(h) || !self.is_mono(k) {
            return Err(Error::NotMono("commuting_subobjects".into()));
        }
        let g = &h.cod;
        let commute = h.table.iter().all(|&a| {
            k.table.iter().all(|&b| g.mul(a, b) == g.mul(b, a))
        });
        if !commute {
            return Ok(None);
        }
        let (prod, pr1, pr2) = self.product(&h.dom, &k.dom);
        let table: Vec<usize> = (0..prod.size)
            .map(|v| g.mul(h.table[pr1.table[v]], k.table[pr2.table[v]]))
            .collect();
        let mu = GroupHom::new(prod, g.clone(), table)?;
        Ok(Some(mu))
    }

    /// Minimal generating sequence, greedily extending by the first element
    /// that grows the closure.
    pub fn generators(&self, g: &FinGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = vec![0usize];
        while current.len() < g.size {
            let next = (1..g.size)
                .find(|&x| current.binary_search(&x).is_err())
                .expect("closure not full yet");
            gens.push(next);
            current = g.subgroup_closure(&gens);
        }
        gens
    }

    /// Brute-force isomorphism search by mapping a generating sequence.
    pub fn find_isomorphism(&self, g: &FinGroup, h: &FinGroup) -> Option<GroupHom> {
        if g.size != h.size {
            return None;
        }
        let mut g_orders: Vec<usize> = (0..g.size).map(|a| g.element_order(a)).collect();
        let mut h_orders: Vec<usize> = (0..h.size).map(|a| h.element_order(a)).collect();
        let h_orders_raw = h_orders.clone();
        g_orders.sort_unstable();
        h_orders.sort_unstable();
        if g_orders != h_orders || g.is_abelian() != h.is_abelian() {
            return None;
        }
        let gens = self.generators(g);
        let mut assignment = vec![0usize; gens.len()];
        self.extend_iso(g, h, &gens, &h_orders_raw, &mut assignment, 0)
    }

    fn extend_iso(
        &self,
        g: &FinGroup,
        h: &FinGroup,
        gens: &[usize],
        h_orders: &[usize],
        assignment: &mut Vec<usize>,
        depth: usize,
    ) -> Option<GroupHom> {
        if depth == gens.len() {
            let table = self.hom_from_generator_images(g, h, gens, assignment)?;
            let mut seen = vec![false; h.size];
            for &v in &table {
                if std::mem::replace(&mut seen[v], true) {
                    return None;
                }
            }
            return GroupHom::new(g.clone(), h.clone(), table).ok();
        }
        let want = g.element_order(gens[depth]);
        for cand in 0..h.size {
            if h_orders[cand] != want {
                continue;
            }
            assignment[depth] = cand;
            if let Some(found) = self.extend_iso(g, h, gens, h_orders, assignment, depth + 1) {
                return Some(found);
            }
        }
        None
    }

    /// Build the full hom table from generator images by BFS over words;
    /// None if the images are inconsistent.
    fn hom_from_generator_images(
        &self,
        g: &FinGroup,
        h: &FinGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut table = vec![usize::MAX; g.size];
        table[0] = 0;
        let mut frontier = vec![0usize];
        while let Some(a) = frontier.pop() {
            for (&s, &t) in gens.iter().zip(images) {
                let na = g.mul(a, s);
                let nv = h.mul(table[a], t);
                if table[na] == usize::MAX {
                    table[na] = nv;
                    frontier.push(na);
                } else if table[na] != nv {
                    return None;
                }
            }
        }
        if table.iter().any(|&v| v == usize::MAX) {
            return None; // gens do not generate
        }
        for a in 0..g.size {
            for b in 0..g.size {
                if table[g.op[a][b]] != h.op[table[a]][table[b]] {
                    return None;
                }
            }
        }
        Some(table)
    }
}

impl ZExact for Grp {
    type Obj = FinGroup;
    type Mor = GroupHom;

    fn name(&self) -> &'static str {
        "group"
    }

    fn dom(&self, f: &GroupHom) -> FinGroup {
        f.dom.clone()
    }

    fn cod(&self, f: &GroupHom) -> FinGroup {
        f.cod.clone()
    }

    fn eq_mor(&self, f: &GroupHom, g: &GroupHom) -> bool {
        f == g
    }

    fn identity(&self, x: &FinGroup) -> GroupHom {
        GroupHom { dom: x.clone(), cod: x.clone(), table: (0..x.size).collect() }
    }

    fn compose(&self, g: &GroupHom, f: &GroupHom) -> Result<GroupHom> {
        if f.cod != g.dom {
            return Err(Error::ComposeMismatch);
        }
        Ok(GroupHom {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&v| g.table[v]).collect(),
        })
    }

    fn zero_object(&self) -> FinGroup {
        FinGroup { size: 1, op: vec![vec![0]], inv: vec![0] }
    }

    fn is_zero_object(&self, x: &FinGroup) -> bool {
        x.size == 1
    }

    fn zero_mor(&self, x: &FinGroup, y: &FinGroup) -> GroupHom {
        GroupHom { dom: x.clone(), cod: y.clone(), table: vec![0; x.size] }
    }

    fn is_mono(&self, f: &GroupHom) -> bool {
        f.table.iter().filter(|&&v| v == 0).count() == 1
    }

    fn is_epi(&self, f: &GroupHom) -> bool {
        // For finite groups, epimorphisms are exactly the surjections.
        self.image_carrier(f).len() == f.cod.size
    }

    fn kernel(&self, f: &GroupHom) -> GroupHom {
        let carrier: Vec<usize> =
            (0..f.dom.size).filter(|&i| f.table[i] == 0).collect();
        let (k, incl) = f.dom.subgroup_object(&carrier);
        GroupHom { dom: k, cod: f.dom.clone(), table: incl }
    }

    fn cokernel(&self, f: &GroupHom) -> GroupHom {
        let image = self.image_carrier(f);
        let ncl = f.cod.normal_closure_of(&image);
        let (q, proj) = f.cod.quotient_by(&ncl);
        GroupHom { dom: f.cod.clone(), cod: q, table: proj }
    }

    fn lift_through_mono(&self, m: &GroupHom, g: &GroupHom) -> Option<GroupHom> {
        if m.cod != g.cod {
            return None;
        }
        let mut preimage = vec![usize::MAX; m.cod.size];
        for (i, &v) in m.table.iter().enumerate() {
            if preimage[v] != usize::MAX {
                return None;
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
        Some(GroupHom { dom: g.dom.clone(), cod: m.dom.clone(), table })
    }

    fn descend_along_epi(&self, e: &GroupHom, g: &GroupHom) -> Option<GroupHom> {
        if e.dom != g.dom {
            return None;
        }
        let mut table = vec![usize::MAX; e.cod.size];
        for i in 0..e.dom.size {
            let q = e.table[i];
            if table[q] == usize::MAX {
                table[q] = g.table[i];
            } else if table[q] != g.table[i] {
                return None;
            }
        }
        if table.iter().any(|&v| v == usize::MAX) {
            return None;
        }
        Some(GroupHom { dom: e.cod.clone(), cod: g.cod.clone(), table })
    }

    fn product(&self, x: &FinGroup, y: &FinGroup) -> (FinGroup, GroupHom, GroupHom) {
        let n = x.size * y.size;
        let idx = |i: usize, j: usize| i * y.size + j;
        let mut op = vec![vec![0usize; n]; n];
        for i1 in 0..x.size {
            for j1 in 0..y.size {
                for i2 in 0..x.size {
                    for j2 in 0..y.size {
                        op[idx(i1, j1)][idx(i2, j2)] = idx(x.op[i1][i2], y.op[j1][j2]);
                    }
                }
            }
        }
        let p = FinGroup::assemble(op);
        let mut t1 = Vec::with_capacity(n);
        let mut t2 = Vec::with_capacity(n);
        for i in 0..x.size {
            for j in 0..y.size {
                t1.push(i);
                t2.push(j);
            }
        }
        (
            p.clone(),
            GroupHom { dom: p.clone(), cod: x.clone(), table: t1 },
            GroupHom { dom: p, cod: y.clone(), table: t2 },
        )
    }

    fn pair(&self, f: &GroupHom, g: &GroupHom) -> Result<GroupHom> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.cod, &g.cod);
        let table = (0..f.dom.size)
            .map(|t| f.table[t] * g.cod.size + g.table[t])
            .collect();
        Ok(GroupHom { dom: f.dom.clone(), cod: p, table })
    }

    fn pullback(&self, f: &GroupHom, g: &GroupHom)
        -> Result<(FinGroup, GroupHom, GroupHom)> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (p, pr1, pr2) = self.product(&f.dom, &g.dom);
        let carrier: Vec<usize> = (0..p.size)
            .filter(|&v| f.table[pr1.table[v]] == g.table[pr2.table[v]])
            .collect();
        let (sub, incl) = p.subgroup_object(&carrier);
        let leg1 = incl.iter().map(|&v| pr1.table[v]).collect();
        let leg2 = incl.iter().map(|&v| pr2.table[v]).collect();
        Ok((
            sub.clone(),
            GroupHom { dom: sub.clone(), cod: f.dom.clone(), table: leg1 },
            GroupHom { dom: sub, cod: g.dom.clone(), table: leg2 },
        ))
    }

    fn kernel_pair(&self, f: &GroupHom) -> (FinGroup, GroupHom, GroupHom) {
        self.pullback(f, f).expect("kernel pair is a self-pullback")
    }

    fn coproduct(&self, _x: &FinGroup, _y: &FinGroup)
        -> Result<(FinGroup, GroupHom, GroupHom)> {
        Err(Error::Unsupported("free products of groups are infinite".into()))
    }

    fn copair(&self, _f: &GroupHom, _g: &GroupHom) -> Result<GroupHom> {
        Err(Error::Unsupported("free products of groups are infinite".into()))
    }

    fn pushout(&self, _f: &GroupHom, _g: &GroupHom)
        -> Result<(FinGroup, GroupHom, GroupHom)> {
        Err(Error::Unsupported(
            "general pushouts of finite groups are unsupported; use pushout_normal_epi".into(),
        ))
    }

    fn add_mor(&self, _f: &GroupHom, _g: &GroupHom) -> Result<GroupHom> {
        Err(Error::Unsupported("Grp is not CMon-enriched".into()))
    }

    fn is_homological(&self) -> bool {
        true
    }

    fn image_subobject(&self, f: &GroupHom) -> GroupHom {
        let carrier = self.image_carrier(f);
        let (s, incl) = f.cod.subgroup_object(&carrier);
        GroupHom { dom: s, cod: f.cod.clone(), table: incl }
    }

    fn join_subobjects(&self, m: &GroupHom, n: &GroupHom) -> Result<GroupHom> {
        if m.cod != n.cod {
            return Err(Error::ComposeMismatch);
        }
        let mut gens = self.image_carrier(m);
        gens.extend(self.image_carrier(n));
        let carrier = m.cod.subgroup_closure(&gens);
        let (s, incl) = m.cod.subgroup_object(&carrier);
        Ok(GroupHom { dom: s, cod: m.cod.clone(), table: incl })
    }

    fn meet_subobjects(&self, m: &GroupHom, n: &GroupHom) -> Result<GroupHom> {
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
        let (s, incl) = m.cod.subgroup_object(&carrier);
        Ok(GroupHom { dom: s, cod: m.cod.clone(), table: incl })
    }

    fn enumerate_subobjects(&self, x: &FinGroup) -> Result<Vec<GroupHom>> {
        Ok(x.all_subgroups()
            .into_iter()
            .map(|carrier| {
                let (s, incl) = x.subgroup_object(&carrier);
                GroupHom { dom: s, cod: x.clone(), table: incl }
            })
            .collect())
    }

    fn enumerate_normal_subobjects(&self, x: &FinGroup) -> Result<Vec<GroupHom>> {
        Ok(x.all_normal_subgroups()
            .into_iter()
            .map(|carrier| {
                let (s, incl) = x.subgroup_object(&carrier);
                GroupHom { dom: s, cod: x.clone(), table: incl }
            })
            .collect())
    }

    fn enumerate_homs(&self, x: &FinGroup, y: &FinGroup, cap: usize)
        -> Result<Vec<GroupHom>> {
        let gens = if x.size == 1 { vec![] } else { self.generators(x) };
        let count = y.size.checked_pow(gens.len() as u32).unwrap_or(usize::MAX);
        if count > cap {
            return Err(Error::BoundExceeded(format!("{count} generator assignments")));
        }
        let mut out = Vec::new();
        let mut images = vec![0usize; gens.len()];
        loop {
            if let Some(table) = self.hom_from_generator_images(x, y, &gens, &images) {
                out.push(GroupHom { dom: x.clone(), cod: y.clone(), table });
            }
            let mut i = gens.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                images[i] += 1;
                if images[i] < y.size {
                    break;
                }
                images[i] = 0;
            }
        }
    }

    fn find_retraction(&self, m: &GroupHom) -> Option<GroupHom> {
        if !self.is_mono(m) {
            return None;
        }
        let homs = self.enumerate_homs(&m.cod, &m.dom, 2_000_000).ok()?;
        let id = self.identity(&m.dom);
        homs.into_iter().find(|r| {
            self.compose(r, m).map(|c| self.eq_mor(&c, &id)).unwrap_or(false)
        })
    }

    fn find_section(&self, e: &GroupHom) -> Option<GroupHom> {
        if !self.is_epi(e) {
            return None;
        }
        let homs = self.enumerate_homs(&e.cod, &e.dom, 2_000_000).ok()?;
        let id = self.identity(&e.cod);
        homs.into_iter().find(|s| {
            self.compose(e, s).map(|c| self.eq_mor(&c, &id)).unwrap_or(false)
        })
    }

    fn object_label(&self, x: &FinGroup) -> String {
        let mut orders: Vec<usize> = (0..x.size).map(|a| x.element_order(a)).collect();
        orders.sort_unstable();
        format!(
            "group(order={}, abelian={}, element_orders={:?})",
            x.size,
            x.is_abelian(),
            orders
        )
    }
}

/// Constructors for the bundled group catalog.
pub mod catalog {
    use super::FinGroup;

    pub fn cyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        let op = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FinGroup::new(op).expect("cyclic group")
    }

    pub fn direct_product(a: &FinGroup, b: &FinGroup) -> FinGroup {
        let n = a.size * b.size;
        let idx = |i: usize, j: usize| i * b.size + j;
        let mut op = vec![vec![0usize; n]; n];
        for i1 in 0..a.size {
            for j1 in 0..b.size {
                for i2 in 0..a.size {
                    for j2 in 0..b.size {
                        op[idx(i1, j1)][idx(i2, j2)] = idx(a.op[i1][i2], b.op[j1][j2]);
                    }
                }
            }
        }
        FinGroup::new(op).expect("direct product")
    }

    /// Semidirect product N x| H for an action `act(h, n)` of H on N by
    /// automorphisms. Element (n, h) has index n * |H| + h.
    pub fn semidirect(
        n: &FinGroup,
        h: &FinGroup,
        act: impl Fn(usize, usize) -> usize,
    ) -> FinGroup {
        let size = n.size * h.size;
        let idx = |a: usize, x: usize| a * h.size + x;
        let mut op = vec![vec![0usize; size]; size];
        for a1 in 0..n.size {
            for x1 in 0..h.size {
                for a2 in 0..n.size {
                    for x2 in 0..h.size {
                        op[idx(a1, x1)][idx(a2, x2)] =
                            idx(n.op[a1][act(x1, a2)], h.op[x1][x2]);
                    }
                }
            }
        }
        FinGroup::new(op).expect("semidirect product data must define a group")
    }

    pub fn dihedral(order: usize) -> FinGroup {
        assert!(order >= 2 && order % 2 == 0);
        let half = order / 2;
        let zn = cyclic(half);
        semidirect(&zn, &cyclic(2), |s, x| if s == 1 { (half - x) % half } else { x })
    }

    /// Dicyclic group of order 4n; `dicyclic(2)` is the quaternion group Q8.
    pub fn dicyclic(n: usize) -> FinGroup {
        assert!(n >= 1);
        let two_n = 2 * n;
        let size = 4 * n;
        // element a^i b^j, index i * 2 + j
        let idx = |i: usize, j: usize| i * 2 + j;
        let mut op = vec![vec![0usize; size]; size];
        for i1 in 0..two_n {
            for j1 in 0..2 {
                for i2 in 0..two_n {
                    for j2 in 0..2 {
                        let (i, j) = if j1 == 0 {
                            (((i1 + i2) % two_n), j2)
                        } else if j2 == 0 {
                            (((i1 + two_n - i2) % two_n), 1)
                        } else {
                            (((i1 + two_n - i2 + n) % two_n), 0)
                        };
                        op[idx(i1, j1)][idx(i2, j2)] = idx(i, j);
                    }
                }
            }
        }
        FinGroup::new(op).expect("dicyclic group")
    }

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out.sort();
        out
    }

    fn perm_group(ps: Vec<Vec<usize>>) -> FinGroup {
        let id: Vec<usize> = (0..ps[0].len()).collect();
        let mut ps = ps;
        ps.sort();
        let pos = ps.iter().position(|p| *p == id).expect("identity present");
        ps.swap(0, pos);
        let index_of = |p: &Vec<usize>| ps.iter().position(|q| q == p).expect("closed");
        let n = ps.len();
        let mut op = vec![vec![0usize; n]; n];
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in ps.iter().enumerate() {
                // (p * q)(x) = p(q(x))
                let comp: Vec<usize> = (0..p.len()).map(|x| p[q[x]]).collect();
                op[i][j] = index_of(&comp);
            }
        }
        FinGroup::new(op).expect("permutation group")
    }

    pub fn symmetric(n: usize) -> FinGroup {
        assert!((1..=4).contains(&n));
        perm_group(perms(n))
    }

    pub fn alternating(n: usize) -> FinGroup {
        assert!((1..=4).contains(&n));
        let even: Vec<Vec<usize>> = perms(n)
            .into_iter()
            .filter(|p| {
                let mut inv = 0;
                for i in 0..p.len() {
                    for j in (i + 1)..p.len() {
                        if p[i] > p[j] {
                            inv += 1;
                        }
                    }
                }
                inv % 2 == 0
            })
            .collect();
        perm_group(even)
    }

    /// (Z/3 x Z/3) x| C2 with the swap action, order 18.
    pub fn generalized_dihedral_3x3() -> FinGroup {
        let z3 = cyclic(3);
        let n = direct_product(&z3, &z3);
        // act(1, (a, b)) = (b, a); index of (a, b) in the product is a*3+b
        semidirect(&n, &cyclic(2), |s, x| if s == 1 { (x % 3) * 3 + x / 3 } else { x })
    }

    pub fn semidihedral_16() -> FinGroup {
        semidirect(&cyclic(8), &cyclic(2), |s, x| if s == 1 { (3 * x) % 8 } else { x })
    }

    pub fn modular_16() -> FinGroup {
        semidirect(&cyclic(8), &cyclic(2), |s, x| if s == 1 { (5 * x) % 8 } else { x })
    }

    pub fn z4_semidirect_z4() -> FinGroup {
        semidirect(&cyclic(4), &cyclic(4), |s, x| if s % 2 == 1 { (4 - x) % 4 } else { x })
    }

    /// Abelian groups of order n, as lists of cyclic factor sizes (primary
    /// decomposition), deterministic order.
    pub fn abelian_factorizations(n: usize) -> Vec<Vec<usize>> {
        fn partitions(k: u32) -> Vec<Vec<u32>> {
            fn go(k: u32, max: u32) -> Vec<Vec<u32>> {
                if k == 0 {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for first in (1..=k.min(max)).rev() {
                    for mut rest in go(k - first, first) {
                        let mut p = vec![first];
                        p.append(&mut rest);
                        out.push(p);
                    }
                }
                out
            }
            go(k, k)
        }
        let mut factors: Vec<(usize, u32)> = Vec::new();
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += 1;
        }
        if m > 1 {
            factors.push((m, 1));
        }
        let mut result: Vec<Vec<usize>> = vec![vec![]];
        for (p, e) in factors {
            let mut next = Vec::new();
            for part in partitions(e) {
                for base in &result {
                    let mut g = base.clone();
                    for exp in &part {
                        g.push(p.pow(*exp));
                    }
                    next.push(g);
                }
            }
            result = next;
        }
        result
    }

    pub fn abelian_from_factors(factors: &[usize]) -> FinGroup {
        let mut g = cyclic(1);
        for &f in factors {
            g = direct_product(&g, &cyclic(f));
        }
        g
    }

    /// The bundled set: every abelian group of order <= 16 plus a named list
    /// of nonabelian groups up to order 24.
    pub fn bundle() -> Vec<(String, FinGroup)> {
        let mut out = Vec::new();
        for n in 1..=16 {
            for factors in abelian_factorizations(n) {
                let name = if factors.is_empty() {
                    "Z1".to_string()
                } else {
                    factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join("x")
                };
                out.push((name, abelian_from_factors(&factors)));
            }
        }
        let nonabelian: Vec<(&str, FinGroup)> = vec![
            ("S3", symmetric(3)),
            ("D8", dihedral(8)),
            ("Q8", dicyclic(2)),
            ("D10", dihedral(10)),
            ("D12", dihedral(12)),
            ("A4", alternating(4)),
            ("Dic3", dicyclic(3)),
            ("D14", dihedral(14)),
            ("D16", dihedral(16)),
            ("Q16", dicyclic(4)),
            ("SD16", semidihedral_16()),
            ("M16", modular_16()),
            ("Z4sZ4", z4_semidirect_z4()),
            ("D8xZ2", direct_product(&dihedral(8), &cyclic(2))),
            ("Q8xZ2", direct_product(&dicyclic(2), &cyclic(2))),
            ("GD18", generalized_dihedral_3x3()),
            ("D20", dihedral(20)),
            ("S3xZ3", direct_product(&symmetric(3), &cyclic(3))),
            ("S4", symmetric(4)),
            ("S3xZ4", direct_product(&symmetric(3), &cyclic(4))),
            ("A4xZ2", direct_product(&alternating(4), &cyclic(2))),
        ];
        out.extend(nonabelian.into_iter().map(|(n, g)| (n.to_string(), g)));
        out
    }

    /// Named presets recognized by the JSON loader.
    pub fn preset(name: &str) -> Option<FinGroup> {
        if let Some(stripped) = name.strip_prefix('Z') {
            if let Ok(n) = stripped.parse::<usize>() {
                if n >= 1 && !stripped.contains('x') {
                    return Some(cyclic(n));
                }
            }
        }
        match name {
            "S3" => Some(symmetric(3)),
            "S4" => Some(symmetric(4)),
            "A4" => Some(alternating(4)),
            "D8" => Some(dihedral(8)),
            "D10" => Some(dihedral(10)),
            "D12" => Some(dihedral(12)),
            "D14" => Some(dihedral(14)),
            "D16" => Some(dihedral(16)),
            "Q8" => Some(dicyclic(2)),
            "Q16" => Some(dicyclic(4)),
            "V4" => Some(direct_product(&cyclic(2), &cyclic(2))),
            "GD18" => Some(generalized_dihedral_3x3()),
            _ => None,
        }
    }
}
