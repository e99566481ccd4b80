//! Exact rational plane geometry for ray arrangements: intersection of
//! affine rays, point-on-ray parameters, and an exact counterclockwise
//! angular order on lattice directions.

use num_traits::{Signed, Zero};

use crate::lattice::{sympl_pairing, BoundaryVector};
use crate::{rint, Rat};

/// A point of the planar chart with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    /// `self + t·d` for a lattice direction `d`.
    pub fn step(&self, t: &Rat, d: BoundaryVector) -> Point {
        Point { x: &self.x + t * rint(d.a), y: &self.y + t * rint(d.b) }
    }
}

/// If `p = o + t·d` with `t ≥ 0`, return the lattice parameter `t`.
pub fn ray_param(o: &Point, d: BoundaryVector, p: &Point) -> Option<Rat> {
    let dx = &p.x - &o.x;
    let dy = &p.y - &o.y;
    // collinearity: dx·d.b == dy·d.a
    if &dx * rint(d.b) != &dy * rint(d.a) {
        return None;
    }
    let t = if d.a != 0 { dx / rint(d.a) } else { dy / rint(d.b) };
    if t >= Rat::zero() {
        Some(t)
    } else {
        None
    }
}

/// Intersection of the rays `o1 + t1·d1` and `o2 + t2·d2` with `t1, t2 ≥ 0`.
/// Parallel (or antiparallel) supports yield no transverse intersection.
pub fn intersect_rays(
    o1: &Point,
    d1: BoundaryVector,
    o2: &Point,
    d2: BoundaryVector,
) -> Option<(Rat, Rat, Point)> {
    let det = sympl_pairing(d1, d2);
    if det == 0 {
        return None;
    }
    // o1 + t1 d1 = o2 + t2 d2  ⇒  t1 = ⟨o2−o1, d2⟩/⟨d1,d2⟩, t2 = ⟨o2−o1, d1⟩/⟨d1,d2⟩
    let rx = &o2.x - &o1.x;
    let ry = &o2.y - &o1.y;
    let det = rint(det);
    let t1 = (&rx * rint(d2.b) - &ry * rint(d2.a)) / &det;
    let t2 = (&rx * rint(d1.b) - &ry * rint(d1.a)) / &det;
    if t1 < Rat::zero() || t2 < Rat::zero() {
        return None;
    }
    let p = o1.step(&t1, d1);
    Some((t1, t2, p))
}

/// Exact strict counterclockwise order on nonzero lattice directions,
/// starting just after the reference direction `r`. Requires that neither
/// argument is parallel to `r` (choose `r` with `pick_reference`).
pub fn ccw_less(r: BoundaryVector, v: BoundaryVector, w: BoundaryVector) -> bool {
    let half = |u: BoundaryVector| -> u8 {
        // 0: strictly counterclockwise of r by less than π; 1: the rest
        if sympl_pairing(r, u) > 0 {
            0
        } else {
            1
        }
    };
    let (hv, hw) = (half(v), half(w));
    if hv != hw {
        return hv < hw;
    }
    sympl_pairing(v, w) > 0
}

/// A primitive direction not parallel to any of the given directions.
pub fn pick_reference(dirs: &[BoundaryVector]) -> BoundaryVector {
    let mut candidates = vec![BoundaryVector { a: 1, b: 0 }, BoundaryVector { a: 0, b: 1 }];
    for q in 1..=(dirs.len() as i64 + 2) {
        for p in 1..=(dirs.len() as i64 + 2) {
            candidates.push(BoundaryVector { a: p, b: q });
            candidates.push(BoundaryVector { a: p, b: -q });
        }
    }
    candidates
        .into_iter()
        .find(|c| dirs.iter().all(|d| sympl_pairing(*c, *d) != 0))
        .expect("finitely many directions cannot exhaust the candidate family")
}

/// Squared euclidean distance, exact.
pub fn dist_sq(p: &Point, q: &Point) -> Rat {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    (&dx * &dx) + (&dy * &dy)
}

/// Whether `t` is strictly positive.
pub fn is_positive(t: &Rat) -> bool {
    t.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::bv;
    use crate::rat;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(rint(x), rint(y))
    }

    #[test]
    fn ray_param_examples() {
        let o = pt(-1, 0);
        assert_eq!(ray_param(&o, bv(1, 0), &pt(2, 0)), Some(rint(3)));
        assert_eq!(ray_param(&o, bv(1, 0), &pt(-3, 0)), None); // behind origin
        assert_eq!(ray_param(&o, bv(1, 0), &pt(0, 1)), None); // off the line
        assert_eq!(ray_param(&o, bv(0, 1), &pt(-1, 0)), Some(rint(0)));
    }

    #[test]
    fn intersect_examples() {
        // pentagon geometry: rays from (−1,0) in (1,0) and (0,−1) in (0,1)
        let (t1, t2, p) = intersect_rays(&pt(-1, 0), bv(1, 0), &pt(0, -1), bv(0, 1)).unwrap();
        assert_eq!(t1, rint(1));
        assert_eq!(t2, rint(1));
        assert_eq!(p, pt(0, 0));

        // parallel
        assert!(intersect_rays(&pt(0, 0), bv(1, 0), &pt(0, 1), bv(1, 0)).is_none());
        // would intersect behind one origin
        assert!(intersect_rays(&pt(0, 0), bv(1, 0), &pt(-1, -1), bv(0, -1)).is_none());

        // rational coordinates
        let a = Point::new(rat(1, 2), rint(0));
        let (s1, _, q) = intersect_rays(&a, bv(0, 1), &pt(0, 1), bv(1, 1)).unwrap();
        assert_eq!(q, Point::new(rat(1, 2), rat(3, 2)));
        assert_eq!(s1, rat(3, 2));
    }

    #[test]
    fn ccw_order_examples() {
        let r = bv(1, 1);
        // starting just past (1,1), counterclockwise: (0,1), (-1,0), (0,-1), (1,0)
        let mut dirs = vec![bv(1, 0), bv(0, -1), bv(0, 1), bv(-1, 0)];
        dirs.sort_by(|a, b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if ccw_less(r, *a, *b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        assert_eq!(dirs, vec![bv(0, 1), bv(-1, 0), bv(0, -1), bv(1, 0)]);
    }

    #[test]
    fn reference_avoids_given_directions() {
        let dirs = vec![bv(1, 0), bv(0, 1), bv(1, 1), bv(1, -1), bv(2, 1), bv(1, 2)];
        let r = pick_reference(&dirs);
        for d in &dirs {
            assert_ne!(sympl_pairing(r, *d), 0);
        }
    }
}
