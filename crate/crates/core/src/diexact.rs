//! Short exact sequences, antinormal pairs and dinversion, di-extensions
//! built from antinormal pairs, and the border/middle cases of the 3x3
//! lemma. Everything is generic over a z-exact backend.

use crate::error::{Error, Result};
use crate::zexact::{
    is_normal_epi, is_normal_mono, is_normal_map, normal_mono_factorization,
    pullback_normal_mono, pushout_normal_epi, quotient_eq, subobject_eq, ZExact,
};

/// A kernel-cokernel pair `K >-k-> X -q->> Q`.
#[derive(Debug)]
pub struct Ses<C: ZExact> {
    pub k: C::Mor,
    pub q: C::Mor,
}

pub fn is_short_exact<C: ZExact>(cat: &C, k: &C::Mor, q: &C::Mor) -> bool {
    if cat.cod(k) != cat.dom(q) {
        return false;
    }
    let kq = cat.kernel(q);
    let qk = cat.cokernel(k);
    subobject_eq(cat, k, &kq) && quotient_eq(cat, q, &qk)
}

pub fn ses<C: ZExact>(cat: &C, k: C::Mor, q: C::Mor) -> Result<Ses<C>> {
    if !is_short_exact(cat, &k, &q) {
        return Err(Error::Precondition("not a short exact sequence".into()));
    }
    Ok(Ses { k, q })
}

/// The short exact sequence generated by a normal mono.
pub fn ses_from_normal_mono<C: ZExact>(cat: &C, m: &C::Mor) -> Result<Ses<C>> {
    if !is_normal_mono(cat, m)? {
        return Err(Error::NotMono("ses_from_normal_mono: not a normal mono".into()));
    }
    Ok(Ses { k: m.clone(), q: cat.cokernel(m) })
}

pub fn ses_from_normal_epi<C: ZExact>(cat: &C, e: &C::Mor) -> Result<Ses<C>> {
    if !is_normal_epi(cat, e) {
        return Err(Error::NotEpi("ses_from_normal_epi: not a normal epi".into()));
    }
    Ok(Ses { k: cat.kernel(e), q: e.clone() })
}

/// Exactness at the middle of `A -f-> B -g-> C`: f is normal with image
/// equal to ker(g).
pub fn is_exact_at<C: ZExact>(cat: &C, f: &C::Mor, g: &C::Mor) -> Result<bool> {
    if cat.cod(f) != cat.dom(g) {
        return Err(Error::ComposeMismatch);
    }
    if !is_normal_map(cat, f) {
        return Ok(false);
    }
    let image = normal_mono_factorization(cat, f).second;
    Ok(subobject_eq(cat, &image, &cat.kernel(g)))
}

/// Exactness of a chain of composable morphisms at every interior node.
pub fn is_exact_sequence<C: ZExact>(cat: &C, maps: &[C::Mor]) -> Result<bool> {
    for w in maps.windows(2) {
        if !is_exact_at(cat, &w[0], &w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A normal mono followed by a normal epi.
#[derive(Debug)]
pub struct AntinormalPair<C: ZExact> {
    pub mu: C::Mor,
    pub eps: C::Mor,
}

impl<C: ZExact> AntinormalPair<C> {
    pub fn composite(&self, cat: &C) -> C::Mor {
        cat.compose(&self.eps, &self.mu).expect("antinormal pair is composable")
    }
}

pub fn antinormal_pair<C: ZExact>(cat: &C, mu: C::Mor, eps: C::Mor)
    -> Result<AntinormalPair<C>> {
    if cat.cod(&mu) != cat.dom(&eps) {
        return Err(Error::ComposeMismatch);
    }
    if !is_normal_mono(cat, &mu)? {
        return Err(Error::NotMono("antinormal pair: mu must be a normal mono".into()));
    }
    if !is_normal_epi(cat, &eps) {
        return Err(Error::NotEpi("antinormal pair: eps must be a normal epi".into()));
    }
    Ok(AntinormalPair { mu, eps })
}

/// Dinversion: `(mu, eps) |-> (ker(eps), coker(mu))`.
pub fn dinversion<C: ZExact>(cat: &C, p: &AntinormalPair<C>) -> AntinormalPair<C> {
    AntinormalPair { mu: cat.kernel(&p.eps), eps: cat.cokernel(&p.mu) }
}

/// Dinversion is an involution up to isomorphism of antinormal pairs.
pub fn pairs_isomorphic<C: ZExact>(cat: &C, a: &AntinormalPair<C>, b: &AntinormalPair<C>)
    -> bool {
    subobject_eq(cat, &a.mu, &b.mu) && quotient_eq(cat, &a.eps, &b.eps)
}

/// Row-major 3x3 grid of objects and morphisms.
///
/// `h[r][c]: objects[r][c] -> objects[r][c+1]`,
/// `v[r][c]: objects[r][c] -> objects[r+1][c]`.
#[derive(Debug)]
pub struct Grid<C: ZExact> {
    pub objects: [[C::Obj; 3]; 3],
    pub h: [[C::Mor; 2]; 3],
    pub v: [[C::Mor; 3]; 2],
}

/// Which short exact line of a grid failed, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridLine {
    Row(usize),
    Col(usize),
    Square { row: usize, col: usize },
}

impl<C: ZExact> Grid<C> {
    /// The nine axis-aligned rectangles all commute: both paths from
    /// objects[r1][c1] to objects[r2][c2] agree.
    pub fn first_non_commuting(&self, cat: &C) -> Option<GridLine> {
        for r1 in 0..3 {
            for r2 in (r1 + 1)..3 {
                for c1 in 0..3 {
                    for c2 in (c1 + 1)..3 {
                        let top = self.h_path(cat, r1, c1, c2);
                        let down_right = self.v_path(cat, c2, r1, r2);
                        let left = self.v_path(cat, c1, r1, r2);
                        let bottom = self.h_path(cat, r2, c1, c2);
                        let p1 = cat.compose(&down_right, &top).expect("grid shape");
                        let p2 = cat.compose(&bottom, &left).expect("grid shape");
                        if !cat.eq_mor(&p1, &p2) {
                            return Some(GridLine::Square { row: r1, col: c1 });
                        }
                    }
                }
            }
        }
        None
    }

    fn h_path(&self, cat: &C, r: usize, c1: usize, c2: usize) -> C::Mor {
        let mut m = cat.identity(&self.objects[r][c1]);
        for c in c1..c2 {
            m = cat.compose(&self.h[r][c], &m).expect("grid shape");
        }
        m
    }

    fn v_path(&self, cat: &C, c: usize, r1: usize, r2: usize) -> C::Mor {
        let mut m = cat.identity(&self.objects[r1][c]);
        for r in r1..r2 {
            m = cat.compose(&self.v[r][c], &m).expect("grid shape");
        }
        m
    }

    pub fn row(&self, r: usize) -> (&C::Mor, &C::Mor) {
        (&self.h[r][0], &self.h[r][1])
    }

    pub fn col(&self, c: usize) -> (&C::Mor, &C::Mor) {
        (&self.v[0][c], &self.v[1][c])
    }

    /// First failing check of the di-extension property, if any: nine
    /// commuting rectangles plus six short exact lines.
    pub fn first_failure(&self, cat: &C) -> Option<GridLine> {
        if let Some(sq) = self.first_non_commuting(cat) {
            return Some(sq);
        }
        for r in 0..3 {
            let (k, q) = self.row(r);
            if !is_short_exact(cat, k, q) {
                return Some(GridLine::Row(r));
            }
        }
        for c in 0..3 {
            let (k, q) = self.col(c);
            if !is_short_exact(cat, k, q) {
                return Some(GridLine::Col(c));
            }
        }
        None
    }
}

pub fn verify_di_extension<C: ZExact>(cat: &C, grid: &Grid<C>) -> bool {
    grid.first_failure(cat).is_none()
}

fn grid_objects<C: ZExact>(cat: &C, h: &[[C::Mor; 2]; 3], _v: &[[C::Mor; 3]; 2])
    -> [[C::Obj; 3]; 3] {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            if c < 2 {
                cat.dom(&h[r][c])
            } else {
                cat.cod(&h[r][1])
            }
        })
    })
}

/// Expand an antinormal pair to a full di-extension. Errors
/// with the offending comparison when `eps . mu` or its dinversion is not a
/// normal map.
pub fn di_extension_from_pair<C: ZExact>(cat: &C, p: &AntinormalPair<C>)
    -> Result<Grid<C>> {
    let mu = &p.mu;
    let eps = &p.eps;
    let pi = cat.cokernel(mu);
    let kappa = cat.kernel(eps);
    let alpha = cat.compose(eps, mu)?;
    let omega = cat.compose(&pi, &kappa)?;
    if !is_normal_map(cat, &alpha) {
        return Err(Error::NotNormal { which: "alpha = eps . mu".into() });
    }
    if !is_normal_map(cat, &omega) {
        return Err(Error::NotNormal { which: "omega = pi . kappa".into() });
    }
    // top-left pullback of mu along kappa
    let (a, u) = pullback_normal_mono(cat, &kappa, mu)?;
    // bottom-right pushout of eps along pi
    let (z, f_bottom) = pushout_normal_epi(cat, &pi, eps)?;
    // normal factorization of alpha through coker(u)
    let x = cat.cokernel(&u);
    let c = cat
        .descend_along_epi(&x, &alpha)
        .ok_or_else(|| Error::Internal("alpha does not descend along coker(u)".into()))?;
    // normal factorization of omega through ker(z)
    let w = cat.kernel(&z);
    let d = cat
        .lift_through_mono(&w, &omega)
        .ok_or_else(|| Error::Internal("omega does not lift through ker(z)".into()))?;
    let h = [[a, d], [mu.clone(), pi], [c, f_bottom]];
    let v = [[u, kappa, w], [x, eps.clone(), z]];
    let objects = grid_objects(cat, &h, &v);
    let grid = Grid { objects, h, v };
    match grid.first_failure(cat) {
        None => Ok(grid),
        Some(line) => Err(Error::Internal(format!(
            "constructed grid fails the di-extension property at {line:?}"
        ))),
    }
}

/// A grid with exactly one border line of morphisms absent.
#[derive(Debug)]
pub struct PartialGrid<C: ZExact> {
    pub h: [[Option<C::Mor>; 2]; 3],
    pub v: [[Option<C::Mor>; 3]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderLine {
    Top,
    Bottom,
    Left,
    Right,
}

impl<C: ZExact> PartialGrid<C> {
    fn missing_line(&self) -> Result<BorderLine> {
        let top = self.h[0][0].is_none() || self.h[0][1].is_none();
        let bottom = self.h[2][0].is_none() || self.h[2][1].is_none();
        let left = self.v[0][0].is_none() || self.v[1][0].is_none();
        let right = self.v[0][2].is_none() || self.v[1][2].is_none();
        let middle_h = self.h[1][0].is_none() || self.h[1][1].is_none();
        let middle_v = self.v[0][1].is_none() || self.v[1][1].is_none();
        if middle_h || middle_v {
            return Err(Error::Precondition(
                "the middle row and middle column must be supplied".into(),
            ));
        }
        match (top, bottom, left, right) {
            (true, false, false, false) => Ok(BorderLine::Top),
            (false, true, false, false) => Ok(BorderLine::Bottom),
            (false, false, true, false) => Ok(BorderLine::Left),
            (false, false, false, true) => Ok(BorderLine::Right),
            (false, false, false, false) => Err(Error::Precondition(
                "no border line is absent; nothing to complete".into(),
            )),
            _ => Err(Error::Precondition(
                "more than one border line is absent".into(),
            )),
        }
    }

    fn mor(&self, which: &str, m: &Option<C::Mor>) -> Result<C::Mor> {
        m.clone().ok_or_else(|| Error::Schema {
            path: which.to_string(),
            msg: "expected a morphism in this slot".into(),
        })
    }
}

/// Border cases of the 3x3 lemma: complete the single missing border
/// line by
/// recomputing it from kernels and cokernels, then certify the whole grid
/// as a di-extension.
pub fn three_by_three_border<C: ZExact>(cat: &C, grid: &PartialGrid<C>) -> Result<Grid<C>> {
    let line = grid.missing_line()?;
    let b = grid.mor("h[1][0]", &grid.h[1][0])?;
    let e = grid.mor("h[1][1]", &grid.h[1][1])?;
    let vmid = grid.mor("v[0][1]", &grid.v[0][1])?;
    let y = grid.mor("v[1][1]", &grid.v[1][1])?;
    if !is_short_exact(cat, &b, &e) {
        return Err(Error::Precondition("middle row is not short exact".into()));
    }
    if !is_short_exact(cat, &vmid, &y) {
        return Err(Error::Precondition("middle column is not short exact".into()));
    }
    let require_ses = |k: &C::Mor, q: &C::Mor, name: &str| -> Result<()> {
        if !is_short_exact(cat, k, q) {
            return Err(Error::Precondition(format!("{name} is not short exact")));
        }
        Ok(())
    };
    let (h, v): ([[C::Mor; 2]; 3], [[C::Mor; 3]; 2]) = match line {
        BorderLine::Right => {
            let a = grid.mor("h[0][0]", &grid.h[0][0])?;
            let d = grid.mor("h[0][1]", &grid.h[0][1])?;
            let c = grid.mor("h[2][0]", &grid.h[2][0])?;
            let f = grid.mor("h[2][1]", &grid.h[2][1])?;
            let u = grid.mor("v[0][0]", &grid.v[0][0])?;
            let x = grid.mor("v[1][0]", &grid.v[1][0])?;
            require_ses(&a, &d, "top row")?;
            require_ses(&c, &f, "bottom row")?;
            require_ses(&u, &x, "left column")?;
            let w = cat
                .descend_along_epi(&d, &cat.compose(&e, &vmid)?)
                .ok_or_else(|| Error::Internal("right column: w has no filler".into()))?;
            let z = cat
                .descend_along_epi(&e, &cat.compose(&f, &y)?)
                .ok_or_else(|| Error::Internal("right column: z has no filler".into()))?;
            ([[a, d], [b, e], [c, f]], [[u, vmid, w], [x, y, z]])
        }
        BorderLine::Left => {
            let a = grid.mor("h[0][0]", &grid.h[0][0])?;
            let d = grid.mor("h[0][1]", &grid.h[0][1])?;
            let c = grid.mor("h[2][0]", &grid.h[2][0])?;
            let f = grid.mor("h[2][1]", &grid.h[2][1])?;
            let w = grid.mor("v[0][2]", &grid.v[0][2])?;
            let z = grid.mor("v[1][2]", &grid.v[1][2])?;
            require_ses(&a, &d, "top row")?;
            require_ses(&c, &f, "bottom row")?;
            require_ses(&w, &z, "right column")?;
            let u = cat
                .lift_through_mono(&b, &cat.compose(&vmid, &a)?)
                .ok_or_else(|| Error::Internal("left column: u has no filler".into()))?;
            let x = cat
                .lift_through_mono(&c, &cat.compose(&y, &b)?)
                .ok_or_else(|| Error::Internal("left column: x has no filler".into()))?;
            ([[a, d], [b, e], [c, f]], [[u, vmid, w], [x, y, z]])
        }
        BorderLine::Top => {
            let c = grid.mor("h[2][0]", &grid.h[2][0])?;
            let f = grid.mor("h[2][1]", &grid.h[2][1])?;
            let u = grid.mor("v[0][0]", &grid.v[0][0])?;
            let x = grid.mor("v[1][0]", &grid.v[1][0])?;
            let w = grid.mor("v[0][2]", &grid.v[0][2])?;
            let z = grid.mor("v[1][2]", &grid.v[1][2])?;
            require_ses(&c, &f, "bottom row")?;
            require_ses(&u, &x, "left column")?;
            require_ses(&w, &z, "right column")?;
            let a = cat
                .lift_through_mono(&vmid, &cat.compose(&b, &u)?)
                .ok_or_else(|| Error::Internal("top row: a has no filler".into()))?;
            let d = cat
                .lift_through_mono(&w, &cat.compose(&e, &vmid)?)
                .ok_or_else(|| Error::Internal("top row: d has no filler".into()))?;
            ([[a, d], [b, e], [c, f]], [[u, vmid, w], [x, y, z]])
        }
        BorderLine::Bottom => {
            let a = grid.mor("h[0][0]", &grid.h[0][0])?;
            let d = grid.mor("h[0][1]", &grid.h[0][1])?;
            let u = grid.mor("v[0][0]", &grid.v[0][0])?;
            let x = grid.mor("v[1][0]", &grid.v[1][0])?;
            let w = grid.mor("v[0][2]", &grid.v[0][2])?;
            let z = grid.mor("v[1][2]", &grid.v[1][2])?;
            require_ses(&a, &d, "top row")?;
            require_ses(&u, &x, "left column")?;
            require_ses(&w, &z, "right column")?;
            let c = cat
                .descend_along_epi(&x, &cat.compose(&y, &b)?)
                .ok_or_else(|| Error::Internal("bottom row: c has no filler".into()))?;
            let f = cat
                .descend_along_epi(&y, &cat.compose(&z, &e)?)
                .ok_or_else(|| Error::Internal("bottom row: f has no filler".into()))?;
            ([[a, d], [b, e], [c, f]], [[u, vmid, w], [x, y, z]])
        }
    };
    let objects = grid_objects(cat, &h, &v);
    let grid = Grid { objects, h, v };
    match grid.first_failure(cat) {
        None => Ok(grid),
        Some(line) => Err(Error::Precondition(format!(
            "completion failed the di-extension property at {line:?}"
        ))),
    }
}

/// Middle case of the 3x3 lemma: all three columns and the outer rows
/// are short
/// exact, and the middle row composes to zero; certify the middle row.
/// Requires a homological backend.
pub fn three_by_three_middle<C: ZExact>(cat: &C, grid: &Grid<C>) -> Result<Grid<C>> {
    if !cat.is_homological() {
        return Err(Error::Unsupported(format!(
            "the middle case of the 3x3 lemma requires a homological backend; {} is not",
            cat.name()
        )));
    }
    if let Some(sq) = grid.first_non_commuting(cat) {
        return Err(Error::Precondition(format!("grid does not commute at {sq:?}")));
    }
    for c in 0..3 {
        let (k, q) = grid.col(c);
        if !is_short_exact(cat, k, q) {
            return Err(Error::Precondition(format!("column {c} is not short exact")));
        }
    }
    for r in [0usize, 2] {
        let (k, q) = grid.row(r);
        if !is_short_exact(cat, k, q) {
            return Err(Error::Precondition(format!("row {r} is not short exact")));
        }
    }
    let (b, e) = grid.row(1);
    let comp = cat.compose(e, b)?;
    let zero = cat.zero_mor(&cat.dom(b), &cat.cod(e));
    if !cat.eq_mor(&comp, &zero) {
        return Err(Error::Precondition("middle row does not compose to zero".into()));
    }
    if !is_short_exact(cat, b, e) {
        return Err(Error::Internal(
            "middle row failed to be short exact in a homological backend".into(),
        ));
    }
    Ok(grid.clone())
}

/// The morphism-level data of a morphism of short exact sequences.
#[derive(Debug)]
pub struct SesMorphism<C: ZExact> {
    pub top: Ses<C>,
    pub bottom: Ses<C>,
    pub kappa: C::Mor,
    pub xi: C::Mor,
    pub rho: C::Mor,
}

impl<C: ZExact> SesMorphism<C> {
    pub fn new(cat: &C, top: Ses<C>, bottom: Ses<C>, kappa: C::Mor, xi: C::Mor, rho: C::Mor)
        -> Result<Self> {
        let left1 = cat.compose(&bottom.k, &kappa)?;
        let left2 = cat.compose(&xi, &top.k)?;
        if !cat.eq_mor(&left1, &left2) {
            return Err(Error::Precondition("left square does not commute".into()));
        }
        let right1 = cat.compose(&bottom.q, &xi)?;
        let right2 = cat.compose(&rho, &top.q)?;
        if !cat.eq_mor(&right1, &right2) {
            return Err(Error::Precondition("right square does not commute".into()));
        }
        Ok(SesMorphism { top, bottom, kappa, xi, rho })
    }
}


impl<C: ZExact> Clone for Ses<C> {
    fn clone(&self) -> Self {
        Ses { k: self.k.clone(), q: self.q.clone() }
    }
}

impl<C: ZExact> Clone for AntinormalPair<C> {
    fn clone(&self) -> Self {
        AntinormalPair { mu: self.mu.clone(), eps: self.eps.clone() }
    }
}

impl<C: ZExact> Clone for Grid<C> {
    fn clone(&self) -> Self {
        Grid { objects: self.objects.clone(), h: self.h.clone(), v: self.v.clone() }
    }
}

impl<C: ZExact> Clone for SesMorphism<C> {
    fn clone(&self) -> Self {
        SesMorphism {
            top: self.top.clone(),
            bottom: self.bottom.clone(),
            kappa: self.kappa.clone(),
            xi: self.xi.clone(),
            rho: self.rho.clone(),
        }
    }
}

/// The canonical comparison between two presentations of the same subobject,
/// as an explicit isomorphism dom(m1) -> dom(m2).
pub fn subobject_compare<C: ZExact>(cat: &C, m1: &C::Mor, m2: &C::Mor) -> Option<C::Mor> {
    let fwd = cat.lift_through_mono(m2, m1)?;
    cat.lift_through_mono(m1, m2)?;
    Some(fwd)
}
