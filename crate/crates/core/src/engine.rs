//! Scenes of focus-focus singularities, initial BPS rays, loop products at
//! ray intersections, the order-by-order completion algorithm, consistency
//! reports, invariant queries and wall-crossing deltas.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::automorphism::{
    compose, AutomorphismError, Endomorphism, InvariantTable, WallCrossingMap,
};
use crate::geom::{intersect_rays, pick_reference, ray_param, ccw_less, Point};
use crate::lattice::{
    primitive_decompose, sympl_pairing, BoundaryVector, LatticeError, Refinement,
};
use crate::novikov::{Cutoff, SeriesError, TruncatedSeries};
use crate::{rat, rint, Rat};

const MAX_STAGES: usize = 256;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("ray from ({ox},{oy}) in direction {dir} passes through singularity #{sing}")]
    RayHitsSingularity { ox: Rat, oy: Rat, dir: BoundaryVector, sing: usize },
    #[error("non-terminating stage: {0}")]
    NonTerminating(String),
    #[error("query point coincides with a singularity")]
    QueryAtSingularity,
    #[error("defect term in class {0} is not normal to its own direction")]
    DefectNotNormal(BoundaryVector),
    #[error("no provenance decomposition found for class {0} at energy {1}")]
    ProvenanceNotFound(BoundaryVector, Rat),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Automorphism(#[from] AutomorphismError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A focus-focus singularity of type `Iₙ` on the planar chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singularity {
    pub pos: Point,
    /// Monodromy-invariant direction, primitive.
    pub direction: BoundaryVector,
    /// `n` of `Iₙ`; the initial slab is the `n`-th power of the `I₁` one.
    pub multiplicity: u32,
}

/// Axis-aligned rational rectangle for figure output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rat,
    pub ymin: Rat,
    pub xmax: Rat,
    pub ymax: Rat,
}

/// A configured problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub singularities: Vec<Singularity>,
    pub cutoff: Cutoff,
    pub epsilon: u8,
    pub sigma: Refinement,
    pub viewport: Option<Viewport>,
}

impl Scene {
    pub fn validate(&self) -> Result<(), EngineError> {
        for (i, s) in self.singularities.iter().enumerate() {
            if !s.direction.is_primitive() {
                return Err(EngineError::InvalidScene(format!(
                    "singularity #{i} direction {} is not primitive",
                    s.direction
                )));
            }
            if s.multiplicity == 0 {
                return Err(EngineError::InvalidScene(format!(
                    "singularity #{i} has multiplicity 0"
                )));
            }
            for (j, t) in self.singularities.iter().enumerate().skip(i + 1) {
                if s.pos == t.pos {
                    return Err(EngineError::InvalidScene(format!(
                        "singularities #{i} and #{j} share a position"
                    )));
                }
            }
        }
        if self.epsilon > 1 {
            return Err(EngineError::InvalidScene("epsilon must be 0 or 1".into()));
        }
        match &self.cutoff {
            Cutoff::Energy(l) if !l.is_positive() => {
                return Err(EngineError::InvalidScene("energy cutoff must be positive".into()))
            }
            Cutoff::Degree(0) => {
                return Err(EngineError::InvalidScene("degree cutoff must be positive".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

/// One monomial of a symbolic slab function: `coeff·z^{l·direction}` with
/// T-exponent `base + l·|direction|²·t` at lattice parameter `t` along the
/// ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabTerm {
    pub coeff: Rat,
    pub l: i64,
    pub base: Rat,
}

/// A wall of the diagram: the affine ray `origin + t·direction`, `t ≥ 0`,
/// carrying a slab function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub origin: Point,
    pub direction: BoundaryVector,
    pub slab: Vec<SlabTerm>,
    pub generation: u32,
    /// T-exponent of the primitive class `z^{direction}` at the origin.
    pub unit_base: Rat,
    /// `(parent ray id, coefficient)` of the class decomposition of the
    /// first inserted slab term; empty for initial rays.
    pub provenance: Vec<(usize, i64)>,
}

impl Ray {
    /// The slab function at lattice parameter `t`, truncated.
    pub fn evaluate_slab(&self, t: &Rat, cutoff: &Cutoff) -> TruncatedSeries {
        let rate = rint(self.direction.norm_sq());
        let mut f = TruncatedSeries::one(cutoff.clone());
        for term in &self.slab {
            f.push(
                term.coeff.clone(),
                term.l * self.direction,
                &term.base + rint(term.l) * &rate * t,
            );
        }
        f
    }
}

/// A point where two or more walls meet, with the lattice parameters of
/// every ray through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionPoint {
    pub point: Point,
    /// `(ray id, lattice parameter of the point on that ray)`, sorted by id.
    pub rays: Vec<(usize, Rat)>,
}

/// One crossing of the loop circle around a point: which ray, in which
/// outgoing direction the circle meets it, and the wall transformation.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub ray_id: usize,
    pub position: BoundaryVector,
    pub map: WallCrossingMap,
}

/// One surviving defect monomial of a loop product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectTerm {
    pub zvec: BoundaryVector,
    pub texp: Rat,
    /// Coefficients of the term in `log(E(x)/x)` and `log(E(y)/y)`.
    pub alpha: Rat,
    pub beta: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub scene: Scene,
    pub rays: Vec<Ray>,
    pub completed: bool,
}

/// The initial diagram: two rays per singularity in directions `±m`, slab
/// `(1+z^{±m}T^t)^n` expanded binomially, base exponent 0 at the
/// singularity.
pub fn initial_diagram(scene: &Scene) -> Result<Diagram, EngineError> {
    scene.validate()?;
    let mut rays = Vec::new();
    for s in &scene.singularities {
        for dir in [s.direction, -s.direction] {
            let n = s.multiplicity as i64;
            let mut slab = Vec::new();
            for k in 1..=n {
                slab.push(SlabTerm { coeff: binomial(n, k), l: k, base: Rat::zero() });
            }
            rays.push(Ray {
                origin: s.pos.clone(),
                direction: dir,
                slab,
                generation: 0,
                unit_base: Rat::zero(),
                provenance: Vec::new(),
            });
        }
    }
    let diagram = Diagram { scene: scene.clone(), rays, completed: false };
    diagram.check_genericity()?;
    Ok(diagram)
}

fn binomial(n: i64, k: i64) -> Rat {
    let mut c = Rat::one();
    for i in 0..k {
        c = c * rint(n - i) / rint(i + 1);
    }
    c
}

impl Diagram {
    /// Every ray must avoid every singularity except its own origin.
    fn check_genericity(&self) -> Result<(), EngineError> {
        for r in &self.rays {
            for (j, s) in self.scene.singularities.iter().enumerate() {
                if s.pos == r.origin {
                    continue;
                }
                if ray_param(&r.origin, r.direction, &s.pos).is_some() {
                    return Err(EngineError::RayHitsSingularity {
                        ox: r.origin.x.clone(),
                        oy: r.origin.y.clone(),
                        dir: r.direction,
                        sing: j,
                    });
                }
            }
        }
        Ok(())
    }

    fn is_singularity(&self, p: &Point) -> bool {
        self.scene.singularities.iter().any(|s| &s.pos == p)
    }

    /// All points where at least two walls with nontrivial slab meet,
    /// sorted lexicographically by coordinates.
    pub fn collision_points(&self) -> Vec<CollisionPoint> {
        let cutoff = &self.scene.cutoff;
        let mut by_point: BTreeMap<Point, BTreeMap<usize, Rat>> = BTreeMap::new();
        for i in 0..self.rays.len() {
            for j in (i + 1)..self.rays.len() {
                let (ri, rj) = (&self.rays[i], &self.rays[j]);
                if let Some((ti, tj, p)) =
                    intersect_rays(&ri.origin, ri.direction, &rj.origin, rj.direction)
                {
                    if self.is_singularity(&p) {
                        continue;
                    }
                    let entry = by_point.entry(p).or_default();
                    entry.insert(i, ti);
                    entry.insert(j, tj);
                }
            }
        }
        let mut out = Vec::new();
        for (point, rays) in by_point {
            let live: Vec<(usize, Rat)> = rays
                .into_iter()
                .filter(|(id, t)| !self.rays[*id].evaluate_slab(t, cutoff).is_one())
                .collect();
            if live.len() >= 2 {
                out.push(CollisionPoint { point, rays: live });
            }
        }
        out
    }

    /// The wall crossings of a small counterclockwise loop around `p`, in
    /// crossing order. A ray through `p` with `t > 0` is crossed twice with
    /// opposite normals; a ray starting at `p` is crossed once.
    pub fn loop_crossings(&self, p: &Point) -> Result<Vec<Crossing>, EngineError> {
        if self.is_singularity(p) {
            return Err(EngineError::QueryAtSingularity);
        }
        let cutoff = &self.scene.cutoff;
        let mut crossings: Vec<(BoundaryVector, usize, WallCrossingMap)> = Vec::new();
        for (id, r) in self.rays.iter().enumerate() {
            let Some(t) = ray_param(&r.origin, r.direction, p) else { continue };
            let f = r.evaluate_slab(&t, cutoff);
            if f.is_one() {
                continue;
            }
            let mut positions = vec![r.direction];
            if t.is_positive() {
                positions.push(-r.direction);
            }
            for w in positions {
                // normal n with ⟨n, tangent⟩ > 0 at the crossing: n(v) = ⟨w, v⟩
                let map = WallCrossingMap::new(r.direction, (-w.b, w.a), f.clone())?;
                crossings.push((w, id, map));
            }
        }
        let reference = pick_reference(&crossings.iter().map(|(w, _, _)| *w).collect::<Vec<_>>());
        crossings.sort_by(|(v, i, _), (w, j, _)| {
            if v == w {
                i.cmp(j)
            } else if ccw_less(reference, *v, *w) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Ok(crossings
            .into_iter()
            .map(|(position, ray_id, map)| Crossing { ray_id, position, map })
            .collect())
    }

    /// Ordered composite of the wall transformations around `p`.
    pub fn loop_product(&self, p: &Point) -> Result<Endomorphism, EngineError> {
        let maps: Vec<WallCrossingMap> =
            self.loop_crossings(p)?.into_iter().map(|c| c.map).collect();
        Ok(compose(&maps, self.scene.cutoff.clone()))
    }

    /// Surviving defect monomials of the loop product at `p`.
    pub fn loop_defects(&self, p: &Point) -> Result<Vec<DefectTerm>, EngineError> {
        let endo = self.loop_product(p)?;
        let (ax, ay) = endo.log_defect()?;
        let mut keys: BTreeMap<(Rat, (i64, i64)), (Rat, Rat)> = BTreeMap::new();
        for m in ax.terms() {
            keys.entry((m.texp, (m.zvec.a, m.zvec.b))).or_default().0 = m.coeff;
        }
        for m in ay.terms() {
            keys.entry((m.texp, (m.zvec.a, m.zvec.b))).or_default().1 = m.coeff;
        }
        Ok(keys
            .into_iter()
            .map(|((texp, (a, b)), (alpha, beta))| DefectTerm {
                zvec: BoundaryVector { a, b },
                texp,
                alpha,
                beta,
            })
            .collect())
    }

    /// Consistency report: every collision point with its surviving defect
    /// terms. Empty means consistent to the cutoff.
    pub fn check_consistency(&self) -> Result<Vec<(Point, Vec<DefectTerm>)>, EngineError> {
        let mut report = Vec::new();
        for cp in self.collision_points() {
            let defects = self.loop_defects(&cp.point)?;
            if !defects.is_empty() {
                report.push((cp.point, defects));
            }
        }
        Ok(report)
    }

    /// Filtration level of a defect term in the active mode.
    fn level(&self, term: &DefectTerm) -> Rat {
        match &self.scene.cutoff {
            Cutoff::Energy(_) => term.texp.clone(),
            Cutoff::Degree(_) => rint(term.zvec.degree() as i64),
        }
    }

    /// Complete the diagram: stage by stage, cancel the lowest-level loop
    /// defects by inserting rays until every loop product is the identity
    /// modulo the cutoff.
    pub fn complete(mut self) -> Result<Diagram, EngineError> {
        let mut prev_level: Option<Rat> = None;
        for _stage in 0..MAX_STAGES {
            let collisions = self.collision_points();
            let mut stage_defects: Vec<(Point, Vec<(usize, Rat)>, DefectTerm)> = Vec::new();
            for cp in &collisions {
                for d in self.loop_defects(&cp.point)? {
                    stage_defects.push((cp.point.clone(), cp.rays.clone(), d));
                }
            }
            if stage_defects.is_empty() {
                self.completed = true;
                return Ok(self);
            }
            let lstar = stage_defects
                .iter()
                .map(|(_, _, d)| self.level(d))
                .min()
                .expect("nonempty");
            if let Some(prev) = &prev_level {
                if &lstar <= prev {
                    return Err(EngineError::NonTerminating(format!(
                        "stage level {lstar} did not exceed previous level {prev}"
                    )));
                }
            }
            prev_level = Some(lstar.clone());
            stage_defects.retain(|(_, _, d)| self.level(d) == lstar);
            stage_defects.sort_by(|(p, _, d), (q, _, e)| {
                (p, d.zvec, &d.texp).cmp(&(q, e.zvec, &e.texp))
            });
            for (p, parents, d) in stage_defects {
                self.insert_cancelling_term(&p, &parents, &d)?;
            }
        }
        Err(EngineError::NonTerminating(format!("no fixed point after {MAX_STAGES} stages")))
    }

    /// Insert (or extend) the ray that cancels one defect term at `p`.
    fn insert_cancelling_term(
        &mut self,
        p: &Point,
        parents: &[(usize, Rat)],
        d: &DefectTerm,
    ) -> Result<(), EngineError> {
        let (l, prim) = primitive_decompose(d.zvec)?;
        // the defect derivation is c·z^v⊗n with n ⊥ v; (alpha,beta) = c·n
        if &d.alpha * rint(d.zvec.a) + &d.beta * rint(d.zvec.b) != Rat::zero() {
            return Err(EngineError::DefectNotNormal(d.zvec));
        }
        // inserted crossing contributes delta·z^v·T^e ⊗ (−prim.b, prim.a);
        // cancellation: (alpha,beta) + delta·(−prim.b, prim.a) = 0
        let delta = if prim.b != 0 {
            &d.alpha / rint(prim.b)
        } else {
            -&d.beta / rint(prim.a)
        };
        if let Some(r) = self
            .rays
            .iter_mut()
            .find(|r| r.origin == *p && r.direction == prim)
        {
            r.slab.push(SlabTerm { coeff: delta, l, base: d.texp.clone() });
            return Ok(());
        }
        // fresh ray: genericity first
        for (j, s) in self.scene.singularities.iter().enumerate() {
            if ray_param(p, prim, &s.pos).is_some() {
                return Err(EngineError::RayHitsSingularity {
                    ox: p.x.clone(),
                    oy: p.y.clone(),
                    dir: prim,
                    sing: j,
                });
            }
        }
        let generation =
            parents.iter().map(|(id, _)| self.rays[*id].generation).max().unwrap_or(0) + 1;
        let provenance = self.provenance_combo(parents, d.zvec, &d.texp)?;
        self.rays.push(Ray {
            origin: p.clone(),
            direction: prim,
            slab: vec![SlabTerm { coeff: delta, l, base: d.texp.clone() }],
            generation,
            unit_base: &d.texp / rint(l),
            provenance,
        });
        Ok(())
    }

    /// Nonnegative integer combination of the parents' primitive classes
    /// matching the defect class and energy, found by bounded search.
    fn provenance_combo(
        &self,
        parents: &[(usize, Rat)],
        v: BoundaryVector,
        e: &Rat,
    ) -> Result<Vec<(usize, i64)>, EngineError> {
        let gens: Vec<(usize, BoundaryVector, Rat)> = parents
            .iter()
            .map(|(id, t)| {
                let r = &self.rays[*id];
                let unit_e = &r.unit_base + rint(r.direction.norm_sq()) * t;
                (*id, r.direction, unit_e)
            })
            .collect();
        let bound = (v.degree() as i64 + 8).min(24);
        let mut coeffs = vec![0i64; gens.len()];
        fn dfs(
            gens: &[(usize, BoundaryVector, Rat)],
            idx: usize,
            rem_v: BoundaryVector,
            rem_e: Rat,
            bound: i64,
            coeffs: &mut Vec<i64>,
        ) -> bool {
            if idx == gens.len() {
                return rem_v.is_zero() && rem_e.is_zero();
            }
            let (_, g, ge) = &gens[idx];
            for a in 0..=bound {
                let used = rint(a) * ge;
                if used > rem_e {
                    break;
                }
                coeffs[idx] = a;
                if dfs(gens, idx + 1, rem_v - a * *g, &rem_e - used, bound, coeffs) {
                    return true;
                }
            }
            coeffs[idx] = 0;
            false
        }
        if dfs(&gens, 0, v, e.clone(), bound, &mut coeffs) {
            Ok(gens
                .iter()
                .zip(coeffs)
                .filter(|(_, a)| *a > 0)
                .map(|((id, _, _), a)| (*id, a))
                .collect())
        } else {
            Err(EngineError::ProvenanceNotFound(v, e.clone()))
        }
    }

    /// Product of the evaluated slab functions of all rays through `u`
    /// with direction exactly `prim`, with the invariants read off it.
    pub fn invariants_at(
        &self,
        u: &Point,
        prim: BoundaryVector,
    ) -> Result<InvariantTable, EngineError> {
        if self.is_singularity(u) {
            return Err(EngineError::QueryAtSingularity);
        }
        let cutoff = &self.scene.cutoff;
        let mut f = TruncatedSeries::one(cutoff.clone());
        let mut unit_energy: Option<Rat> = None;
        for r in &self.rays {
            if r.direction != prim {
                continue;
            }
            let Some(t) = ray_param(&r.origin, r.direction, u) else { continue };
            f = f.mul(&r.evaluate_slab(&t, cutoff))?;
            let e = &r.unit_base + rint(r.direction.norm_sq()) * &t;
            match &unit_energy {
                None => unit_energy = Some(e),
                Some(prev) if *prev == e => {}
                Some(_) => return Err(AutomorphismError::IncoherentEnergies.into()),
            }
        }
        if f.is_one() {
            return Ok(InvariantTable::default());
        }
        let max_order = self.extraction_order(unit_energy.as_ref(), prim);
        Ok(crate::automorphism::extract_invariants(
            &f,
            prim,
            self.scene.epsilon,
            self.scene.sigma,
            max_order,
        )?)
    }

    /// Factorization order sound for the active filtration: in energy mode
    /// the largest `l` with `l·E₁ < λ`, in degree mode `k / deg(prim)`.
    fn extraction_order(&self, unit_energy: Option<&Rat>, prim: BoundaryVector) -> usize {
        const CAP: usize = 16;
        match &self.scene.cutoff {
            Cutoff::Degree(k) => ((*k / prim.degree()) as usize).min(CAP).max(1),
            Cutoff::Energy(lambda) => match unit_energy {
                Some(e1) if e1.is_positive() => {
                    let bound = (lambda / e1).ceil().to_integer();
                    let bound: usize = bound.try_into().unwrap_or(CAP);
                    // largest l with l·E1 < lambda
                    let mut l = bound.min(CAP);
                    while l > 1 && rint(l as i64) * e1 >= *lambda {
                        l -= 1;
                    }
                    l.max(1)
                }
                _ => CAP,
            },
        }
    }

    /// Half of the smallest distance (in lattice parameter along `prim`)
    /// from `p` to any other diagram feature on the line through `p`.
    fn side_step(&self, p: &Point, prim: BoundaryVector) -> Rat {
        let mut min_abs: Option<Rat> = None;
        let mut consider = |t: Rat| {
            if t.is_zero() {
                return;
            }
            let a = t.abs();
            if min_abs.as_ref().map_or(true, |m| &a < m) {
                min_abs = Some(a);
            }
        };
        for r in &self.rays {
            // solve p + t·prim = r.origin + s·r.direction with s ≥ 0
            let det = sympl_pairing(prim, r.direction);
            if det == 0 {
                continue;
            }
            let rx = &r.origin.x - &p.x;
            let ry = &r.origin.y - &p.y;
            let det = rint(det);
            let t = (&rx * rint(r.direction.b) - &ry * rint(r.direction.a)) / &det;
            let s = (&rx * rint(prim.b) - &ry * rint(prim.a)) / &det;
            if s >= Rat::zero() {
                consider(t);
            }
        }
        for sng in &self.scene.singularities {
            let dx = &sng.pos.x - &p.x;
            let dy = &sng.pos.y - &p.y;
            if &dx * rint(prim.b) == &dy * rint(prim.a) {
                let t = if prim.a != 0 { dx / rint(prim.a) } else { dy / rint(prim.b) };
                consider(t);
            }
        }
        min_abs.map(|m| m / rint(2)).unwrap_or_else(Rat::one)
    }

    /// Jump of the invariants of class `gamma` across the collision point
    /// `p`: outgoing side (`p + h·prim`) minus incoming side (`p − h·prim`).
    pub fn wall_delta(
        &self,
        p: &Point,
        gamma: BoundaryVector,
    ) -> Result<(Rat, Rat), EngineError> {
        let (l, prim) = primitive_decompose(gamma)?;
        // keep the probe points close to `p`: a large step would change the
        // accumulated energy enough to shift the extraction order between
        // the two sides and fake a jump
        let h = self.side_step(p, prim).min(rat(1, 16 * prim.norm_sq()));
        let q_out = p.step(&h, prim);
        let q_in = p.step(&-&h, prim);
        let out = self.invariants_at(&q_out, prim)?;
        let inc = self.invariants_at(&q_in, prim)?;
        let l = l as usize;
        Ok((out.omega(l) - inc.omega(l), out.omega_tilde(l) - inc.omega_tilde(l)))
    }
}
