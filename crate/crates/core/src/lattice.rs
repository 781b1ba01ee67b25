//! Finite boxes of the integer lattice `Z^N` and the potential wells living on them.
//!
//! Sites are stored in lexicographic order of their coordinates, first axis slowest.
//! Fields are implicitly zero outside the box, so a site on the box face sees a
//! "ghost" neighbor with value zero across the face.

use crate::{Error, Result};

/// Default upper bound on the number of sites of a box.
pub const DEFAULT_SITE_CAP: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct LatticeBox {
    dim: usize,
    radius: usize,
    side: usize,
    site_count: usize,
    // 2N slots per site, ordered (-e_0, +e_0, -e_1, +e_1, ...); `None` is the zero ghost.
    neighbors: Vec<Option<usize>>,
}

impl LatticeBox {
    /// `{x ∈ Z^N : |x_i| ≤ radius}` with nearest-neighbor adjacency.
    pub fn build(dim: usize, radius: usize) -> Result<Self> {
        Self::build_with_cap(dim, radius, DEFAULT_SITE_CAP)
    }

    pub fn build_with_cap(dim: usize, radius: usize, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Lattice("dimension must be at least 1".into()));
        }
        if radius == 0 {
            return Err(Error::Lattice("radius must be at least 1".into()));
        }
        let side = 2 * radius + 1;
        let site_count = (0..dim)
            .try_fold(1usize, |acc, _| acc.checked_mul(side))
            .filter(|&n| n <= cap)
            .ok_or(Error::TooManySites {
                sites: side.checked_pow(dim as u32).unwrap_or(usize::MAX),
                cap,
            })?;

        let mut lattice = LatticeBox {
            dim,
            radius,
            side,
            site_count,
            neighbors: Vec::with_capacity(site_count * 2 * dim),
        };
        let mut nbrs = Vec::with_capacity(site_count * 2 * dim);
        for idx in 0..site_count {
            let x = lattice.coords(idx);
            for axis in 0..dim {
                for step in [-1i64, 1] {
                    let mut y = x.clone();
                    y[axis] += step;
                    nbrs.push(lattice.index(&y));
                }
            }
        }
        lattice.neighbors = nbrs;
        Ok(lattice)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of sites along one axis, `2R + 1`.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let r = self.radius as i64;
        let mut x = vec![0i64; self.dim];
        for axis in (0..self.dim).rev() {
            x[axis] = (idx % self.side) as i64 - r;
            idx /= self.side;
        }
        x
    }

    /// Flat index of `x`, or `None` outside the box.
    pub fn index(&self, x: &[i64]) -> Option<usize> {
        if x.len() != self.dim {
            return None;
        }
        let r = self.radius as i64;
        let mut idx = 0usize;
        for &xi in x {
            if xi.abs() > r {
                return None;
            }
            idx = idx * self.side + (xi + r) as usize;
        }
        Some(idx)
    }

    /// The `2N` neighbor slots of a site; `None` marks a neighbor across the box face.
    pub fn neighbors(&self, idx: usize) -> &[Option<usize>] {
        let k = 2 * self.dim;
        &self.neighbors[idx * k..(idx + 1) * k]
    }

    /// Number of neighbors that lie inside the box.
    pub fn degree(&self, idx: usize) -> usize {
        self.neighbors(idx).iter().filter(|n| n.is_some()).count()
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.degree(idx) == 2 * self.dim
    }

    /// Sup-norm distance of a site from the box face (0 on the face).
    pub fn depth(&self, idx: usize) -> usize {
        let m = self.coords(idx).iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        self.radius - m as usize
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.site_count {
            return Err(Error::Shape { expected: self.site_count, got: len });
        }
        Ok(())
    }

    /// Signed coordinate permutations of the box that leave every given field invariant.
    ///
    /// Each symmetry is returned as a site map `g` with `(g·f)(x) = f(g[x])`.
    pub fn symmetries_preserving(&self, fields: &[&[f64]]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for perm in permutations(self.dim) {
            for signs in 0..(1u32 << self.dim) {
                let map: Vec<usize> = (0..self.site_count)
                    .map(|idx| {
                        let x = self.coords(idx);
                        let y: Vec<i64> = (0..self.dim)
                            .map(|i| {
                                let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                                s * x[perm[i]]
                            })
                            .collect();
                        self.index(&y).expect("signed permutations fix the box")
                    })
                    .collect();
                let invariant = fields
                    .iter()
                    .all(|f| (0..self.site_count).all(|i| f[map[i]] == f[i]));
                if invariant {
                    out.push(map);
                }
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// A set of box sites as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteSet(Vec<bool>);

impl SiteSet {
    pub fn empty(len: usize) -> Self {
        SiteSet(vec![false; len])
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        SiteSet(mask)
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.0[i] = true;
        }
        s
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.0[idx]
    }

    pub fn mask(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.0.iter().zip(&other.0).map(|(a, b)| *a && *b).collect())
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.0.iter().zip(&other.0).map(|(a, b)| *a || *b).collect())
    }

    pub fn complement(&self) -> SiteSet {
        SiteSet(self.0.iter().map(|b| !b).collect())
    }
}

/// `{y ∉ region : y ~ x for some x ∈ region}`, restricted to the box.
pub fn vertex_boundary(lattice: &LatticeBox, region: &SiteSet) -> Result<SiteSet> {
    lattice.check_len(region.mask().len())?;
    if region.is_empty() {
        return Err(Error::Lattice("vertex boundary of an empty region".into()));
    }
    let mut out = SiteSet::empty(lattice.site_count());
    for x in region.indices() {
        for y in lattice.neighbors(x).iter().flatten() {
            if !region.contains(*y) {
                out.0[*y] = true;
            }
        }
    }
    Ok(out)
}

/// Sup-norm ramp `c · max(0, ‖x − center‖_∞ − radius)^exponent`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WellShape {
    pub center: Vec<i64>,
    pub radius: usize,
    pub exponent: f64,
    pub amplitude: f64,
}

impl WellShape {
    pub fn centered(dim: usize, radius: usize) -> Self {
        WellShape { center: vec![0; dim], radius, exponent: 2.0, amplitude: 1.0 }
    }
}

/// A nonnegative potential on the box together with its zero set.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub values: Vec<f64>,
    pub well: SiteSet,
}

pub fn make_potential(lattice: &LatticeBox, shape: &WellShape) -> Result<PotentialField> {
    if shape.center.len() != lattice.dim() {
        return Err(Error::Potential(format!(
            "well center has {} coordinates, box dimension is {}",
            shape.center.len(),
            lattice.dim()
        )));
    }
    if !(shape.exponent >= 1.0) {
        return Err(Error::Potential("growth exponent must be at least 1".into()));
    }
    if !(shape.amplitude > 0.0) {
        return Err(Error::Potential("amplitude must be positive".into()));
    }
    let reach = shape.center.iter().map(|c| c.unsigned_abs() as usize).max().unwrap_or(0) + shape.radius;
    if reach >= lattice.radius() {
        return Err(Error::Potential(format!(
            "well of radius {} around {:?} is not strictly inside a box of radius {}",
            shape.radius,
            shape.center,
            lattice.radius()
        )));
    }

    let values: Vec<f64> = (0..lattice.site_count())
        .map(|idx| {
            let x = lattice.coords(idx);
            let dist = x
                .iter()
                .zip(&shape.center)
                .map(|(a, b)| (a - b).unsigned_abs())
                .max()
                .unwrap_or(0) as f64;
            let excess = (dist - shape.radius as f64).max(0.0);
            if excess == 0.0 {
                0.0
            } else {
                shape.amplitude * excess.powf(shape.exponent)
            }
        })
        .collect();
    let well = SiteSet(values.iter().map(|&h| h == 0.0).collect());
    Ok(PotentialField { values, well })
}

impl PotentialField {
    pub fn sublevel(&self, threshold: f64) -> SiteSet {
        SiteSet(self.values.iter().map(|&h| h <= threshold).collect())
    }

    /// On a finite box the finiteness requirement on `{h ≤ M}` becomes: nonempty and
    /// a proper subset of the box.
    pub fn check_sublevel(&self, threshold: f64) -> Result<()> {
        if !(threshold > 0.0) {
            return Err(Error::Potential("sublevel threshold must be positive".into()));
        }
        let s = self.sublevel(threshold);
        if s.is_empty() {
            return Err(Error::Potential(format!("sublevel set {{h <= {threshold}}} is empty")));
        }
        if s.len() == self.values.len() {
            return Err(Error::Potential(format!(
                "sublevel set {{h <= {threshold}}} covers the whole box"
            )));
        }
        Ok(())
    }
}

/// Membership flags for the wells, their intersection and their vertex boundaries.
#[derive(Debug, Clone)]
pub struct DomainMask {
    pub omega_a: SiteSet,
    pub omega_b: SiteSet,
    pub omega: SiteSet,
    pub boundary_a: SiteSet,
    pub boundary_b: SiteSet,
}

impl DomainMask {
    pub fn new(lattice: &LatticeBox, a: &PotentialField, b: &PotentialField) -> Result<Self> {
        let omega = a.well.intersection(&b.well);
        if omega.is_empty() {
            return Err(Error::Potential("wells of a and b do not intersect".into()));
        }
        Ok(DomainMask {
            boundary_a: vertex_boundary(lattice, &a.well)?,
            boundary_b: vertex_boundary(lattice, &b.well)?,
            omega_a: a.well.clone(),
            omega_b: b.well.clone(),
            omega,
        })
    }

    /// `Ω̄_a ∪ Ω̄_b`
    pub fn closure_union(&self) -> SiteSet {
        self.omega_a.union(&self.boundary_a).union(&self.omega_b.union(&self.boundary_b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(lattice: &LatticeBox, pts: &[&[i64]]) -> SiteSet {
        SiteSet::from_indices(lattice.site_count(), pts.iter().map(|p| lattice.index(p).unwrap()))
    }

    #[test]
    fn one_dim_box() {
        let l = LatticeBox::build(1, 2).unwrap();
        assert_eq!(l.site_count(), 5);
        let o = l.index(&[0]).unwrap();
        let n: Vec<_> = l.neighbors(o).iter().map(|n| l.coords(n.unwrap())[0]).collect();
        assert_eq!(n, vec![-1, 1]);
        assert_eq!(l.degree(l.index(&[2]).unwrap()), 1);
    }

    #[test]
    fn two_dim_box() {
        let l = LatticeBox::build(2, 1).unwrap();
        assert_eq!(l.site_count(), 9);
        assert_eq!(l.degree(l.index(&[0, 0]).unwrap()), 4);
        assert_eq!(LatticeBox::build(3, 4).unwrap().site_count(), 729);
    }

    #[test]
    fn rejects_degenerate_and_oversized() {
        assert!(LatticeBox::build(0, 3).is_err());
        assert!(LatticeBox::build(2, 0).is_err());
        assert!(matches!(
            LatticeBox::build_with_cap(3, 10, 1000),
            Err(Error::TooManySites { sites: 9261, cap: 1000 })
        ));
    }

    #[test]
    fn adjacency_is_symmetric_and_indices_invert() {
        for (d, r) in [(1, 4), (2, 3), (3, 2)] {
            let l = LatticeBox::build(d, r).unwrap();
            for x in 0..l.site_count() {
                assert_eq!(l.index(&l.coords(x)), Some(x));
                assert!(l.degree(x) <= 2 * d);
                for y in l.neighbors(x).iter().flatten() {
                    assert!(l.neighbors(*y).contains(&Some(x)));
                }
                if l.depth(x) > 0 {
                    assert!(l.is_interior(x));
                }
            }
        }
    }

    #[test]
    fn ramp_potential() {
        let l = LatticeBox::build(1, 5).unwrap();
        let shape = WellShape { center: vec![0], radius: 1, exponent: 2.0, amplitude: 1.0 };
        let h = make_potential(&l, &shape).unwrap();
        assert_eq!(h.values, vec![16.0, 9.0, 4.0, 1.0, 0.0, 0.0, 0.0, 1.0, 4.0, 9.0, 16.0]);
        assert_eq!(h.well, set_of(&l, &[&[-1], &[0], &[1]]));
        assert_eq!(h.sublevel(1.0), set_of(&l, &[&[-2], &[-1], &[0], &[1], &[2]]));
        h.check_sublevel(1.0).unwrap();
        assert!(h.check_sublevel(100.0).is_err());
    }

    #[test]
    fn well_covering_all_but_shell() {
        let l = LatticeBox::build(2, 4).unwrap();
        let h = make_potential(&l, &WellShape::centered(2, 3)).unwrap();
        assert_eq!(h.well.len(), 49);
        for i in 0..l.site_count() {
            assert_eq!(h.well.contains(i), l.depth(i) > 0);
        }
    }

    #[test]
    fn well_must_be_strictly_inside() {
        let l = LatticeBox::build(1, 5).unwrap();
        assert!(make_potential(&l, &WellShape::centered(1, 5)).is_err());
        let shifted = WellShape { center: vec![2], ..WellShape::centered(1, 3) };
        assert!(make_potential(&l, &shifted).is_err());
    }

    #[test]
    fn boundaries() {
        let l = LatticeBox::build(1, 4).unwrap();
        let b = vertex_boundary(&l, &set_of(&l, &[&[0]])).unwrap();
        assert_eq!(b, set_of(&l, &[&[-1], &[1]]));
        let b = vertex_boundary(&l, &set_of(&l, &[&[-1], &[0], &[1]])).unwrap();
        assert_eq!(b, set_of(&l, &[&[-2], &[2]]));

        let l2 = LatticeBox::build(2, 3).unwrap();
        let b = vertex_boundary(&l2, &set_of(&l2, &[&[0, 0]])).unwrap();
        assert_eq!(b, set_of(&l2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));

        assert!(vertex_boundary(&l, &SiteSet::empty(l.site_count())).is_err());
    }

    #[test]
    fn domain_masks_nest() {
        let l = LatticeBox::build(2, 6).unwrap();
        let a = make_potential(&l, &WellShape::centered(2, 3)).unwrap();
        let b = make_potential(&l, &WellShape::centered(2, 2)).unwrap();
        let m = DomainMask::new(&l, &a, &b).unwrap();
        assert_eq!(m.omega, m.omega_b);
        assert!(m.omega.intersection(&vertex_boundary(&l, &m.omega).unwrap()).is_empty());
        assert!(m.omega_a.intersection(&m.boundary_a).is_empty());
    }

    #[test]
    fn symmetry_group_sizes() {
        let l = LatticeBox::build(2, 3).unwrap();
        let h = make_potential(&l, &WellShape::centered(2, 1)).unwrap();
        assert_eq!(l.symmetries_preserving(&[&h.values]).len(), 8);
        let shifted = make_potential(&l, &WellShape { center: vec![1, 0], ..WellShape::centered(2, 1) }).unwrap();
        // only y -> -y survives besides the identity
        assert_eq!(l.symmetries_preserving(&[&shifted.values]).len(), 2);
    }
}
