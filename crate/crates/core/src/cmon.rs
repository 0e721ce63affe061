//! Finite commutative monoids. Unit at index 0, tables validated eagerly.
//! Cokernels are congruence quotients with class-minimum representatives.

use crate::error::{Error, Result};
use crate::zexact::ZExact;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CMonoid {
    pub size: usize,
    /// op[i][j] = i + j
    pub op: Vec<Vec<usize>>,
}

impl CMonoid {
    pub fn new(op: Vec<Vec<usize>>) -> Result<Self> {
        let n = op.len();
        if n == 0 {
            return Err(Error::Validation("monoid table is empty".into()));
        }
        if op.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("monoid table is not square".into()));
        }
        if op.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Validation("monoid table entry out of range".into()));
        }
        for i in 0..n {
            if op[0][i] != i || op[i][0] != i {
                return Err(Error::Validation("index 0 is not a two-sided unit".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if op[a][b] != op[b][a] {
                    return Err(Error::Validation("operation is not commutative".into()));
                }
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
        Ok(CMonoid { size: n, op })
    }

    fn assemble(op: Vec<Vec<usize>>) -> Self {
        CMonoid { size: op.len(), op }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.op[a][b]
    }

    pub fn submonoid_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.size];
        in_set[0] = true;
        let mut members = vec![0usize];
        let mut stack = vec![0usize];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                members.push(g);
                stack.push(g);
            }
        }
        while let Some(a) = stack.pop() {
            let snapshot = members.clone();
            for &b in &snapshot {
                let v = self.add(a, b);
                if !in_set[v] {
                    in_set[v] = true;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        members
    }

    pub fn is_submonoid(&self, carrier: &[usize]) -> bool {
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
        carrier.iter().all(|&a| carrier.iter().all(|&b| in_set[self.add(a, b)]))
    }

    pub fn submonoid_object(&self, carrier: &[usize]) -> (CMonoid, Vec<usize>) {
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
                op[i][j] = index_of[self.add(carrier[i], carrier[j])];
            }
        }
        (CMonoid::assemble(op), carrier.to_vec())
    }
}

/// A partition of the element indices compatible with the operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    /// class index per element; classes numbered by minimal representative
    pub class_of: Vec<usize>,
    pub class_count: usize,
}

impl Congruence {
    fn from_union_find(mut parent: Vec<usize>) -> Self {
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let n = parent.len();
        let mut label = vec![usize::MAX; n];
        let mut class_of = vec![0usize; n];
        let mut count = 0;
        for x in 0..n {
            let r = find(&mut parent, x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            class_of[x] = label[r];
        }
        Congruence { class_of, class_count: count }
    }

    pub fn diagonal(n: usize) -> Self {
        Congruence { class_of: (0..n).collect(), class_count: n }
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count];
        for (x, &c) in self.class_of.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// Compatibility: a ~ a' and b ~ b' imply ab ~ a'b'.
    pub fn is_compatible(&self, m: &CMonoid) -> bool {
        for a in 0..m.size {
            for a2 in 0..m.size {
                if self.class_of[a] != self.class_of[a2] {
                    continue;
                }
                for b in 0..m.size {
                    if self.class_of[m.add(a, b)] != self.class_of[m.add(a2, b)] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Least monoid congruence containing the given pairs: union-find closed
/// under translation.
pub fn congruence_closure(m: &CMonoid, pairs: &[(usize, usize)]) -> Congruence {
    let mut parent: Vec<usize> = (0..m.size).collect();
    fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut worklist: Vec<(usize, usize)> = pairs.to_vec();
    while let Some((a, b)) = worklist.pop() {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            continue;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
        for c in 0..m.size {
            let x = m.add(a, c);
            let y = m.add(b, c);
            if find(&mut parent, x) != find(&mut parent, y) {
                worklist.push((x, y));
            }
        }
    }
    Congruence::from_union_find(parent)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CMonHom {
    pub dom: CMonoid,
    pub cod: CMonoid,
    pub table: Vec<usize>,
}

impl CMonHom {
    pub fn new(dom: CMonoid, cod: CMonoid, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::Validation("hom table length differs from domain".into()));
        }
        if table.first() != Some(&0) {
            return Err(Error::Validation("hom must preserve the unit".into()));
        }
        if table.iter().any(|&v| v >= cod.size) {
            return Err(Error::Validation("hom table entry out of range".into()));
        }
        for a in 0..dom.size {
            for b in 0..dom.size {
                if table[dom.op[a][b]] != cod.op[table[a]][table[b]] {
                    return Err(Error::Validation("not a monoid homomorphism".into()));
                }
            }
        }
        Ok(CMonHom { dom, cod, table })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CMonCat;

impl CMonCat {
    /// Quotient monoid with class-minimum representative labeling and the
    /// projection table.
    pub fn quotient(&self, m: &CMonoid, cong: &Congruence) -> (CMonoid, Vec<usize>) {
        let classes = cong.classes();
        let k = classes.len();
        let mut op = vec![vec![0usize; k]; k];
        for a in 0..k {
            for b in 0..k {
                op[a][b] = cong.class_of[m.add(classes[a][0], classes[b][0])];
            }
        }
        (CMonoid::assemble(op), cong.class_of.clone())
    }

    /// The fiber relation of a normal epi f with kernel K:
    /// b ~ b' iff b + k = b' + k' for some k, k' in K.
    pub fn normal_epi_kernel_pair(&self, f: &CMonHom) -> Congruence {
        let kernel: Vec<usize> =
            (0..f.dom.size).filter(|&i| f.table[i] == 0).collect();
        let m = &f.dom;
        let mut parent: Vec<usize> = (0..m.size).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for b in 0..m.size {
            for b2 in 0..m.size {
                let related = kernel.iter().any(|&k| {
                    kernel.iter().any(|&k2| m.add(b, k) == m.add(b2, k2))
                });
                if related {
                    let ra = find(&mut parent, b);
                    let rb = find(&mut parent, b2);
                    if ra != rb {
                        let (lo, hi) = (ra.min(rb), ra.max(rb));
                        parent[hi] = lo;
                    }
                }
            }
        }
        Congruence::from_union_find(parent)
    }

    fn image_carrier(&self, f: &CMonHom) -> Vec<usize> {
        let mut seen = vec![false; f.cod.size];
        for &v in &f.table {
            seen[v] = true;
        }
        (0..f.cod.size).filter(|&i| seen[i]).collect()
    }

    /// Biproduct with injections and projections (finite coproduct in CMon
    /// agrees with the product).
    pub fn biproduct(&self, x: &CMonoid, y: &CMonoid)
        -> (CMonoid, CMonHom, CMonHom, CMonHom, CMonHom) {
        let (p, pr1, pr2) = self.product(x, y);
        let i1 = CMonHom {
            dom: x.clone(),
            cod: p.clone(),
            table: (0..x.size).map(|i| i * y.size).collect(),
        };
        let i2 = CMonHom {
            dom: y.clone(),
            cod: p.clone(),
            table: (0..y.size).collect(),
        };
        (p, i1, i2, pr1, pr2)
    }

    /// All congruences of m (partition enumeration filtered by
    /// compatibility). Exponential; keep m small.
    pub fn all_congruences(&self, m: &CMonoid) -> Vec<Congruence> {
        fn partitions(n: usize) -> Vec<Vec<usize>> {
            // restricted growth strings
            fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
                if prefix.len() == n {
                    out.push(prefix.clone());
                    return;
                }
                for c in 0..=max + 1 {
                    prefix.push(c);
                    go(prefix, max.max(c), n, out);
                    prefix.pop();
                }
            }
            let mut out = Vec::new();
            if n == 0 {
                return vec![vec![]];
            }
            let mut p = vec![0usize];
            go(&mut p, 0, n, &mut out);
            out
        }
        partitions(m.size)
            .into_iter()
            .map(|class_of| {
                let count = class_of.iter().copied().max().unwrap_or(0) + 1;
                Congruence { class_of, class_count: count }
            })
            .filter(|c| c.is_compatible(m))
            .collect()
    }
}

impl ZExact for CMonCat {
    type Obj = CMonoid;
    type Mor = CMonHom;

    fn name(&self) -> &'static str {
        "cmon"
    }

    fn dom(&self, f: &CMonHom) -> CMonoid {
        f.dom.clone()
    }

    fn cod(&self, f: &CMonHom) -> CMonoid {
        f.cod.clone()
    }

    fn eq_mor(&self, f: &CMonHom, g: &CMonHom) -> bool {
        f == g
    }

    fn identity(&self, x: &CMonoid) -> CMonHom {
        CMonHom { dom: x.clone(), cod: x.clone(), table: (0..x.size).collect() }
    }

    fn compose(&self, g: &CMonHom, f: &CMonHom) -> Result<CMonHom> {
        if f.cod != g.dom {
            return Err(Error::ComposeMismatch);
        }
        Ok(CMonHom {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&v| g.table[v]).collect(),
        })
    }

    fn zero_object(&self) -> CMonoid {
        CMonoid { size: 1, op: vec![vec![0]] }
    }

    fn is_zero_object(&self, x: &CMonoid) -> bool {
        x.size == 1
    }

    fn zero_mor(&self, x: &CMonoid, y: &CMonoid) -> CMonHom {
        CMonHom { dom: x.clone(), cod: y.clone(), table: vec![0; x.size] }
    }

    fn is_mono(&self, f: &CMonHom) -> bool {
        let mut seen = vec![false; f.cod.size];
        f.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Categorical epi via the cokernel pair: f is epi iff the two pushout
    /// injections of f along itself agree.
    fn is_epi(&self, f: &CMonHom) -> bool {
        let (bb, inj1, inj2, _, _) = self.biproduct(&f.cod, &f.cod);
        let pairs: Vec<(usize, usize)> = (0..f.dom.size)
            .map(|a| (inj1.table[f.table[a]], inj2.table[f.table[a]]))
            .collect();
        let cong = congruence_closure(&bb, &pairs);
        (0..f.cod.size).all(|b| {
            cong.class_of[inj1.table[b]] == cong.class_of[inj2.table[b]]
        })
    }

    fn kernel(&self, f: &CMonHom) -> CMonHom {
        let carrier: Vec<usize> =
            (0..f.dom.size).filter(|&i| f.table[i] == 0).collect();
        let (k, incl) = f.dom.submonoid_object(&carrier);
        CMonHom { dom: k, cod: f.dom.clone(), table: incl }
    }

    fn cokernel(&self, f: &CMonHom) -> CMonHom {
        let pairs: Vec<(usize, usize)> = f.table.iter().map(|&v| (v, 0)).collect();
        let cong = congruence_closure(&f.cod, &pairs);
        let (q, proj) = self.quotient(&f.cod, &cong);
        CMonHom { dom: f.cod.clone(), cod: q, table: proj }
    }

    fn lift_through_mono(&self, m: &CMonHom, g: &CMonHom) -> Option<CMonHom> {
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
        Some(CMonHom { dom: g.dom.clone(), cod: m.dom.clone(), table })
    }

    fn descend_along_epi(&self, e: &CMonHom, g: &CMonHom) -> Option<CMonHom> {
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
        Some(CMonHom { dom: e.cod.clone(), cod: g.cod.clone(), table })
    }

    fn product(&self, x: &CMonoid, y: &CMonoid) -> (CMonoid, CMonHom, CMonHom) {
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
        let p = CMonoid::assemble(op);
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
            CMonHom { dom: p.clone(), cod: x.clone(), table: t1 },
            CMonHom { dom: p, cod: y.clone(), table: t2 },
        )
    }

    fn pair(&self, f: &CMonHom, g: &CMonHom) -> Result<CMonHom> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.cod, &g.cod);
        let table = (0..f.dom.size)
            .map(|t| f.table[t] * g.cod.size + g.table[t])
            .collect();
        Ok(CMonHom { dom: f.dom.clone(), cod: p, table })
    }

    fn pullback(&self, f: &CMonHom, g: &CMonHom)
        -> Result<(CMonoid, CMonHom, CMonHom)> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (p, pr1, pr2) = self.product(&f.dom, &g.dom);
        let carrier: Vec<usize> = (0..p.size)
            .filter(|&v| f.table[pr1.table[v]] == g.table[pr2.table[v]])
            .collect();
        let (sub, incl) = p.submonoid_object(&carrier);
        let leg1 = incl.iter().map(|&v| pr1.table[v]).collect();
        let leg2 = incl.iter().map(|&v| pr2.table[v]).collect();
        Ok((
            sub.clone(),
            CMonHom { dom: sub.clone(), cod: f.dom.clone(), table: leg1 },
            CMonHom { dom: sub, cod: g.dom.clone(), table: leg2 },
        ))
    }

    fn kernel_pair(&self, f: &CMonHom) -> (CMonoid, CMonHom, CMonHom) {
        self.pullback(f, f).expect("kernel pair is a self-pullback")
    }

    fn coproduct(&self, x: &CMonoid, y: &CMonoid)
        -> Result<(CMonoid, CMonHom, CMonHom)> {
        let (p, i1, i2, _, _) = self.biproduct(x, y);
        Ok((p, i1, i2))
    }

    fn copair(&self, f: &CMonHom, g: &CMonHom) -> Result<CMonHom> {
        if f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let (p, _, _) = self.product(&f.dom, &g.dom);
        // <f, g>(a, b) = f(a) + g(b)
        let mut table = Vec::with_capacity(p.size);
        for a in 0..f.dom.size {
            for b in 0..g.dom.size {
                table.push(f.cod.add(f.table[a], g.table[b]));
            }
        }
        Ok(CMonHom { dom: p, cod: f.cod.clone(), table })
    }

    fn pushout(&self, f: &CMonHom, g: &CMonHom)
        -> Result<(CMonoid, CMonHom, CMonHom)> {
        if f.dom != g.dom {
            return Err(Error::ComposeMismatch);
        }
        let (bb, i1, i2, _, _) = self.biproduct(&f.cod, &g.cod);
        let pairs: Vec<(usize, usize)> = (0..f.dom.size)
            .map(|z| (i1.table[f.table[z]], i2.table[g.table[z]]))
            .collect();
        let cong = congruence_closure(&bb, &pairs);
        let (p, proj) = self.quotient(&bb, &cong);
        let l1 = CMonHom {
            dom: f.cod.clone(),
            cod: p.clone(),
            table: i1.table.iter().map(|&v| proj[v]).collect(),
        };
        let l2 = CMonHom {
            dom: g.cod.clone(),
            cod: p,
            table: i2.table.iter().map(|&v| proj[v]).collect(),
        };
        Ok((l1.cod.clone(), l1, l2))
    }

    fn add_mor(&self, f: &CMonHom, g: &CMonHom) -> Result<CMonHom> {
        if f.dom != g.dom || f.cod != g.cod {
            return Err(Error::ComposeMismatch);
        }
        let table = (0..f.dom.size).map(|a| f.cod.add(f.table[a], g.table[a])).collect();
        Ok(CMonHom { dom: f.dom.clone(), cod: f.cod.clone(), table })
    }

    fn is_cmon_enriched(&self) -> bool {
        true
    }

    fn image_subobject(&self, f: &CMonHom) -> CMonHom {
        let carrier = self.image_carrier(f);
        let (s, incl) = f.cod.submonoid_object(&carrier);
        CMonHom { dom: s, cod: f.cod.clone(), table: incl }
    }

    fn join_subobjects(&self, m: &CMonHom, n: &CMonHom) -> Result<CMonHom> {
        if m.cod != n.cod {
            return Err(Error::ComposeMismatch);
        }
        let mut gens = self.image_carrier(m);
        gens.extend(self.image_carrier(n));
        let carrier = m.cod.submonoid_closure(&gens);
        let (s, incl) = m.cod.submonoid_object(&carrier);
        Ok(CMonHom { dom: s, cod: m.cod.clone(), table: incl })
    }

    fn meet_subobjects(&self, m: &CMonHom, n: &CMonHom) -> Result<CMonHom> {
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
        let (s, incl) = m.cod.submonoid_object(&carrier);
        Ok(CMonHom { dom: s, cod: m.cod.clone(), table: incl })
    }

    fn enumerate_subobjects(&self, x: &CMonoid) -> Result<Vec<CMonHom>> {
        if x.size > 13 {
            return Err(Error::BoundExceeded(format!(
                "submonoid enumeration over 2^{} subsets",
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
            if x.is_submonoid(&carrier) {
                let (s, incl) = x.submonoid_object(&carrier);
                out.push(CMonHom { dom: s, cod: x.clone(), table: incl });
            }
        }
        Ok(out)
    }

    fn enumerate_normal_subobjects(&self, x: &CMonoid) -> Result<Vec<CMonHom>> {
        Ok(self
            .enumerate_subobjects(x)?
            .into_iter()
            .filter(|m| {
                let k = self.kernel(&self.cokernel(m));
                crate::zexact::subobject_eq(self, m, &k)
            })
            .collect())
    }

    fn enumerate_homs(&self, x: &CMonoid, y: &CMonoid, cap: usize)
        -> Result<Vec<CMonHom>> {
        let free = x.size - 1;
        let count = y.size.checked_pow(free as u32).unwrap_or(usize::MAX);
        if count > cap {
            return Err(Error::BoundExceeded(format!("{count} candidate tables")));
        }
        let mut out = Vec::new();
        let mut table = vec![0usize; x.size];
        loop {
            if CMonHom::new(x.clone(), y.clone(), table.clone()).is_ok() {
                out.push(CMonHom { dom: x.clone(), cod: y.clone(), table: table.clone() });
            }
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

    fn find_retraction(&self, m: &CMonHom) -> Option<CMonHom> {
        if !self.is_mono(m) {
            return None;
        }
        let homs = self.enumerate_homs(&m.cod, &m.dom, 2_000_000).ok()?;
        let id = self.identity(&m.dom);
        homs.into_iter().find(|r| {
            self.compose(r, m).map(|c| self.eq_mor(&c, &id)).unwrap_or(false)
        })
    }

    fn find_section(&self, e: &CMonHom) -> Option<CMonHom> {
        let homs = self.enumerate_homs(&e.cod, &e.dom, 2_000_000).ok()?;
        let id = self.identity(&e.cod);
        homs.into_iter().find(|s| {
            self.compose(e, s).map(|c| self.eq_mor(&c, &id)).unwrap_or(false)
        })
    }

    fn object_label(&self, x: &CMonoid) -> String {
        format!("cmon(order={}, table={:?})", x.size, x.op)
    }
}

/// All commutative monoids of order up to `max_order`, one per isomorphism
/// class, in a deterministic order. Backtracking over the upper triangle of
/// the table with incremental associativity pruning; representatives are
/// chosen as the lexicographically least table over relabelings fixing the
/// unit.
pub fn enumerate_cmonoids(max_order: usize) -> Vec<CMonoid> {
    fn assoc_consistent(op: &[Vec<usize>], n: usize) -> bool {
        const UNSET: usize = usize::MAX;
        for a in 1..n {
            for b in 1..n {
                let ab = op[a][b];
                if ab == UNSET {
                    continue;
                }
                for c in 1..n {
                    let bc = op[b][c];
                    if bc == UNSET {
                        continue;
                    }
                    let left = op[ab][c];
                    let right = op[a][bc];
                    if left != UNSET && right != UNSET && left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn canonical_table(m: &CMonoid) -> Vec<usize> {
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
            out
        }
        let n = m.size;
        let mut best: Option<Vec<usize>> = None;
        for p in perms(n - 1) {
            // relabeling: 0 fixed, old i (>= 1) becomes p[i-1] + 1
            let relabel = |i: usize| if i == 0 { 0 } else { p[i - 1] + 1 };
            let mut flat = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    flat[relabel(a) * n + relabel(b)] = relabel(m.op[a][b]);
                }
            }
            best = match best {
                None => Some(flat),
                Some(prev) if flat < prev => Some(flat),
                keep => keep,
            };
        }
        best.expect("at least the identity relabeling")
    }

    let mut out = Vec::new();
    for n in 1..=max_order {
        if n == 1 {
            out.push(CMonoid { size: 1, op: vec![vec![0]] });
            continue;
        }
        const UNSET: usize = usize::MAX;
        let mut op = vec![vec![UNSET; n]; n];
        for i in 0..n {
            op[0][i] = i;
            op[i][0] = i;
        }
        // free cells: (i, j) with 1 <= i <= j < n
        let cells: Vec<(usize, usize)> = (1..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .collect();
        let mut found: Vec<CMonoid> = Vec::new();
        fn dfs(
            op: &mut Vec<Vec<usize>>,
            cells: &[(usize, usize)],
            at: usize,
            n: usize,
            found: &mut Vec<CMonoid>,
        ) {
            if at == cells.len() {
                let m = CMonoid { size: n, op: op.clone() };
                debug_assert!(CMonoid::new(op.clone()).is_ok());
                found.push(m);
                return;
            }
            let (i, j) = cells[at];
            for v in 0..n {
                op[i][j] = v;
                op[j][i] = v;
                if assoc_consistent(op, n) {
                    dfs(op, cells, at + 1, n, found);
                }
            }
            op[i][j] = usize::MAX;
            op[j][i] = usize::MAX;
        }
        dfs(&mut op, &cells, 0, n, &mut found);
        // isomorph rejection: keep a table only if it is its own canonical
        // form
        for m in found {
            let flat: Vec<usize> =
                m.op.iter().flat_map(|r| r.iter().copied()).collect();
            if flat == canonical_table(&m) {
                out.push(m);
            }
        }
    }
    out
}

/// Small standard monoids used across the tests and probes.
pub mod examples {
    use super::CMonoid;

    pub fn cyclic_add(n: usize) -> CMonoid {
        let op = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        CMonoid::new(op).expect("additive cyclic monoid")
    }

    /// ({0,1}, max): the two-element join-semilattice monoid.
    pub fn max_semilattice() -> CMonoid {
        CMonoid::new(vec![vec![0, 1], vec![1, 1]]).expect("max monoid")
    }

    /// Truncated addition on {0, 1, ..., n-1}, saturating at n-1.
    pub fn truncated_add(n: usize) -> CMonoid {
        let op = (0..n)
            .map(|i| (0..n).map(|j| (i + j).min(n - 1)).collect())
            .collect();
        CMonoid::new(op).expect("truncated addition monoid")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::zexact::{self, subobject_eq};

    /// Oracle: least congruence containing pairs, via exhaustive scan over
    /// all compatible partitions.
    fn congruence_closure_oracle(m: &CMonoid, pairs: &[(usize, usize)]) -> Congruence {
        let cat = CMonCat;
        let mut best: Option<Congruence> = None;
        for c in cat.all_congruences(m) {
            if pairs.iter().all(|&(a, b)| c.class_of[a] == c.class_of[b]) {
                best = match best {
                    None => Some(c),
                    Some(prev) if c.class_count > prev.class_count => Some(c),
                    keep => keep,
                };
            }
        }
        best.expect("full congruence always qualifies")
    }

    #[test]
    fn congruence_closure_examples() {
        let z4 = cyclic_add(4);
        let c = congruence_closure(&z4, &[(2, 0)]);
        assert_eq!(c.class_count, 2);
        assert_eq!(c.class_of, vec![0, 1, 0, 1]); // {0,2}, {1,3}
        assert_eq!(c, congruence_closure_oracle(&z4, &[(2, 0)]));

        let b = max_semilattice();
        let c2 = congruence_closure(&b, &[(1, 0)]);
        assert_eq!(c2.class_count, 1);
        assert_eq!(c2, congruence_closure_oracle(&b, &[(1, 0)]));

        let empty = congruence_closure(&z4, &[]);
        assert_eq!(empty, Congruence::diagonal(4));
    }

    #[test]
    fn kernel_of_fold_is_antidiagonal() {
        let cat = CMonCat;
        let z2 = cyclic_add(2);
        let (p, _i1, _i2, pr1, pr2) = cat.biproduct(&z2, &z2);
        let fold = cat.add_mor(&pr1, &pr2).unwrap();
        let k = cat.kernel(&fold);
        assert_eq!(k.dom.size, 2);
        // carrier {(0,0), (1,1)} = indices {0, 3} in pair order
        assert_eq!(k.table, vec![0, 3]);
        let _ = p;
    }

    #[test]
    fn cokernel_of_zero_into_m_is_identity() {
        let cat = CMonCat;
        let m = truncated_add(3);
        let z = cat.zero_mor(&cat.zero_object(), &m);
        let q = cat.cokernel(&z);
        assert!(zexact::iso_check(&cat, &q));
    }

    #[test]
    fn cokernel_of_unit_inclusion_into_max_monoid() {
        let cat = CMonCat;
        let b = max_semilattice();
        let incl = cat.zero_mor(&cat.zero_object(), &b);
        let q = cat.cokernel(&incl);
        // congruence closure of {(0,0)} is the diagonal: cokernel is id_B
        assert_eq!(q.cod.size, 2);
        assert!(zexact::iso_check(&cat, &q));
    }

    #[test]
    fn split_epi_with_zero_kernel_that_is_not_normal() {
        // Finite analogue of the N x N addition example: fold on the max
        // semilattice is split epic with trivial kernel, yet not a cokernel.
        let cat = CMonCat;
        let b = max_semilattice();
        let (_, _i1, _i2, pr1, pr2) = cat.biproduct(&b, &b);
        let fold = cat.add_mor(&pr1, &pr2).unwrap();
        let k = cat.kernel(&fold);
        assert!(cat.is_zero_object(&k.dom));
        assert!(cat.find_section(&fold).is_some());
        assert!(!zexact::is_normal_epi(&cat, &fold));
    }

    #[test]
    fn normal_epi_kernel_pair_formula_matches_pullback() {
        let cat = CMonCat;
        let z4 = cyclic_add(4);
        let two = CMonHom::new(z4.clone(), z4.clone(), vec![0, 2, 0, 2]).unwrap();
        let e = cat.cokernel(&two); // Z4 mod <2>
        assert!(zexact::is_normal_epi(&cat, &e));
        let formula = cat.normal_epi_kernel_pair(&e);
        let (_kp, pr1, pr2) = cat.kernel_pair(&e);
        // compare: formula relation = {(a,b) : e(a) = e(b)}
        for a in 0..4 {
            for b in 0..4 {
                let in_formula = formula.class_of[a] == formula.class_of[b];
                let in_kp = (0..pr1.dom.size)
                    .any(|v| pr1.table[v] == a && pr2.table[v] == b);
                assert_eq!(in_formula, in_kp, "({a},{b})");
            }
        }

        // identity: diagonal
        let id = cat.identity(&z4);
        assert_eq!(cat.normal_epi_kernel_pair(&id), Congruence::diagonal(4));
    }

    #[test]
    fn biproduct_recognition_identities() {
        let cat = CMonCat;
        let m = cyclic_add(2);
        let n = cyclic_add(3);
        let (_p, i1, i2, pr1, pr2) = cat.biproduct(&m, &n);
        assert!(cat.eq_mor(&cat.compose(&pr1, &i1).unwrap(), &cat.identity(&m)));
        assert!(cat.eq_mor(&cat.compose(&pr2, &i2).unwrap(), &cat.identity(&n)));
        assert!(cat.eq_mor(&cat.compose(&pr2, &i1).unwrap(), &cat.zero_mor(&m, &n)));
        assert!(cat.eq_mor(&cat.compose(&pr1, &i2).unwrap(), &cat.zero_mor(&n, &m)));
        let e1 = cat.compose(&i1, &pr1).unwrap();
        let e2 = cat.compose(&i2, &pr2).unwrap();
        let sum = cat.add_mor(&e1, &e2).unwrap();
        assert!(cat.eq_mor(&sum, &cat.identity(&e1.dom)));
    }

    #[test]
    fn biproduct_with_zero_and_semilattice() {
        let cat = CMonCat;
        let m = truncated_add(3);
        let zero = cat.zero_object();
        let (_p, i1, _i2, pr1, _pr2) = cat.biproduct(&m, &zero);
        // M (+) 0 = M: the first injection is an isomorphism
        assert!(zexact::iso_check(&cat, &i1));
        assert!(zexact::iso_check(&cat, &pr1));
        // the recognition identities also hold for the semilattice squared
        let b = max_semilattice();
        let (_q, j1, j2, q1, q2) = cat.biproduct(&b, &b);
        assert!(cat.eq_mor(&cat.compose(&q1, &j1).unwrap(), &cat.identity(&b)));
        assert!(cat.eq_mor(&cat.compose(&q2, &j2).unwrap(), &cat.identity(&b)));
        let sum = cat
            .add_mor(
                &cat.compose(&j1, &q1).unwrap(),
                &cat.compose(&j2, &q2).unwrap(),
            )
            .unwrap();
        assert!(cat.eq_mor(&sum, &cat.identity(&cat.cod(&j1))));
    }

    #[test]
    fn epi_detection_via_cokernel_pair() {
        let cat = CMonCat;
        // surjections are epi
        let z4 = cyclic_add(4);
        let z2 = cyclic_add(2);
        let modmap = CMonHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(cat.is_epi(&modmap));
        // the unit inclusion into a nontrivial monoid is not epi
        let incl = cat.zero_mor(&cat.zero_object(), &z4);
        assert!(!cat.is_epi(&incl));
    }

    #[test]
    fn normal_subobjects_of_z4() {
        let cat = CMonCat;
        let z4 = cyclic_add(4);
        let subs = cat.enumerate_subobjects(&z4).unwrap();
        // submonoids of (Z/4, +): {0}, {0,2}, Z/4
        assert_eq!(subs.len(), 3);
        let normals = cat.enumerate_normal_subobjects(&z4).unwrap();
        assert_eq!(normals.len(), 3);
        for m in &normals {
            let k = cat.kernel(&cat.cokernel(m));
            assert!(subobject_eq(&cat, m, &k));
        }
    }
}
