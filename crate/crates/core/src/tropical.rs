//! Tropical discs with stops: validation, multiplicities, weighted counts,
//! brute-force enumeration of the fixed-end counts `N^trop`, and the
//! wall-crossing formula over them — the independent oracle against the
//! scattering engine.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geom::Point;
use crate::lattice::{sympl_pairing, BoundaryVector};
use crate::{rint, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropicalError {
    #[error("degenerate position data: {0}")]
    DegeneratePositions(String),
    #[error("vertex {0} is not trivalent")]
    NotTrivalent(usize),
    #[error("incoming direction {0} is not primitive")]
    NonPrimitiveDirection(BoundaryVector),
    #[error("weight vector entries must be positive")]
    ZeroWeight,
    #[error("total weight {0} exceeds the enumeration bound {1}")]
    WeightBound(u64, u64),
}

// ---------------------------------------------------------------------------
// Tropical discs as explicit rooted trees.
// ---------------------------------------------------------------------------

/// Where a vertex of a disc maps: an interior point of the chart or a
/// singularity of the scene (by index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexImage {
    Interior(Point),
    Singularity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscVertex {
    pub id: usize,
    pub image: VertexImage,
}

/// An edge of the disc, oriented from `from` (away from the root) toward
/// `to` (toward the root). Contracted edges still carry their direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u64,
    pub direction: BoundaryVector,
}

/// A rooted weighted balanced tree mapped to the base; the root is the
/// stop, non-root leaves sit on singularities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalDisc {
    pub vertices: Vec<DiscVertex>,
    pub edges: Vec<DiscEdge>,
    pub root: usize,
}

impl TropicalDisc {
    fn vertex(&self, id: usize) -> Option<&DiscVertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn incident(&self, id: usize) -> Vec<&DiscEdge> {
        self.edges.iter().filter(|e| e.from == id || e.to == id).collect()
    }

    /// Lattice parameter of an edge: `pos(to) − pos(from) = t·direction`.
    /// `None` when an endpoint is a singularity reference without position
    /// (those edges are checked for direction only).
    fn edge_param(&self, e: &DiscEdge, scene_positions: &dyn Fn(usize) -> Option<Point>) -> Option<Rat> {
        let pos = |id: usize| -> Option<Point> {
            match &self.vertex(id)?.image {
                VertexImage::Interior(p) => Some(p.clone()),
                VertexImage::Singularity(k) => scene_positions(*k),
            }
        };
        let p = pos(e.from)?;
        let q = pos(e.to)?;
        let dx = &q.x - &p.x;
        let dy = &q.y - &p.y;
        if &dx * rint(e.direction.b) != &dy * rint(e.direction.a) {
            return None;
        }
        Some(if e.direction.a != 0 { dx / rint(e.direction.a) } else { dy / rint(e.direction.b) })
    }
}

/// Check all structural invariants of a disc against a scene described by
/// its singularity positions and invariant directions. Returns the list of
/// violations (empty = valid).
pub fn validate(
    disc: &TropicalDisc,
    singularity_pos: &dyn Fn(usize) -> Option<Point>,
    singularity_dir: &dyn Fn(usize) -> Option<BoundaryVector>,
) -> Vec<String> {
    let mut bad = Vec::new();
    let n = disc.vertices.len();
    if disc.edges.len() + 1 != n {
        bad.push(format!("not a tree: {} vertices but {} edges", n, disc.edges.len()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for v in &disc.vertices {
        if !seen.insert(v.id) {
            bad.push(format!("duplicate vertex id {}", v.id));
        }
    }
    // connectivity
    let mut reach = std::collections::BTreeSet::new();
    let mut stack = vec![disc.root];
    while let Some(v) = stack.pop() {
        if !reach.insert(v) {
            continue;
        }
        for e in disc.incident(v) {
            stack.push(if e.from == v { e.to } else { e.from });
        }
    }
    if reach.len() != n {
        bad.push("graph is not connected".to_string());
    }
    match disc.vertex(disc.root) {
        None => bad.push("root id not among vertices".to_string()),
        Some(r) => {
            if matches!(r.image, VertexImage::Singularity(_)) {
                bad.push("stop maps to a singular point".to_string());
            }
        }
    }
    for v in &disc.vertices {
        let deg = disc.incident(v.id).len();
        if deg == 1 && v.id != disc.root {
            match &v.image {
                VertexImage::Singularity(k) => {
                    let e = disc.incident(v.id)[0];
                    match singularity_dir(*k) {
                        Some(m) if sympl_pairing(e.direction, m) == 0 => {}
                        Some(m) => bad.push(format!(
                            "leaf {} edge direction {} not along invariant direction {m}",
                            v.id, e.direction
                        )),
                        None => bad.push(format!("leaf {} references unknown singularity", v.id)),
                    }
                }
                VertexImage::Interior(_) => {
                    bad.push(format!("leaf {} at a nonsingular point", v.id))
                }
            }
        }
    }
    for e in &disc.edges {
        if e.weight == 0 {
            bad.push(format!("edge {}→{} has weight 0", e.from, e.to));
        }
        if e.direction.is_zero() {
            bad.push(format!("edge {}→{} has no direction", e.from, e.to));
        }
        match disc.edge_param(e, singularity_pos) {
            Some(t) if t >= Rat::zero() => {}
            Some(_) => bad.push(format!("edge {}→{} runs against its direction", e.from, e.to)),
            None => bad.push(format!("edge {}→{} not collinear with its direction", e.from, e.to)),
        }
    }
    // balancing at internal vertices: sum of child classes = parent class
    for v in &disc.vertices {
        let inc = disc.incident(v.id);
        if inc.len() < 2 {
            continue;
        }
        let mut sum = BoundaryVector::ZERO;
        for e in inc {
            let c = e.weight as i64 * e.direction;
            if e.to == v.id {
                sum = sum + c;
            } else {
                sum = sum - c;
            }
        }
        if !sum.is_zero() {
            bad.push(format!("balancing fails at vertex {}: residue {}", v.id, sum));
        }
    }
    bad
}

/// `w1·w2·|m1 ∧ m2|` at a trivalent vertex, for two of its edges.
pub fn vertex_multiplicity(
    w1: u64,
    m1: BoundaryVector,
    w2: u64,
    m2: BoundaryVector,
) -> u64 {
    (w1 as i64 * w2 as i64 * sympl_pairing(m1, m2).abs()) as u64
}

/// Product of vertex multiplicities over internal (trivalent) vertices.
pub fn disc_multiplicity(disc: &TropicalDisc) -> Result<u64, TropicalError> {
    let mut mult = 1u64;
    for v in &disc.vertices {
        let inc = disc.incident(v.id);
        if inc.len() <= 1 {
            continue;
        }
        if inc.len() != 3 {
            return Err(TropicalError::NotTrivalent(v.id));
        }
        // the two edges oriented into v (children)
        let children: Vec<&&DiscEdge> = inc.iter().filter(|e| e.to == v.id).collect();
        if children.len() != 2 {
            return Err(TropicalError::NotTrivalent(v.id));
        }
        mult *= vertex_multiplicity(
            children[0].weight,
            children[0].direction,
            children[1].weight,
            children[1].direction,
        );
    }
    Ok(mult)
}

/// Multiplicity times `(−1)^{d−1}/d²` for every weight-`d` edge adjacent
/// to a singularity.
pub fn disc_weight(disc: &TropicalDisc) -> Result<Rat, TropicalError> {
    let mut w = rint(disc_multiplicity(disc)? as i64);
    for e in &disc.edges {
        let at_sing = |id: usize| {
            matches!(
                disc.vertex(id).map(|v| &v.image),
                Some(VertexImage::Singularity(_))
            )
        };
        if at_sing(e.from) || at_sing(e.to) {
            let d = e.weight as i64;
            let sign = if d % 2 == 1 { 1 } else { -1 };
            w = w * Rat::new(sign.into(), (d * d).into());
        }
    }
    Ok(w)
}

/// Total affine length: sum of weight × lattice length over embedded
/// edges; contracted edges contribute 0.
pub fn disc_energy(
    disc: &TropicalDisc,
    singularity_pos: &dyn Fn(usize) -> Option<Point>,
) -> Rat {
    let mut e_total = Rat::zero();
    for e in &disc.edges {
        if let Some(t) = disc.edge_param(e, singularity_pos) {
            if t.is_positive() {
                e_total += rint(e.weight as i64) * t;
            }
        }
    }
    e_total
}

// ---------------------------------------------------------------------------
// Brute-force enumeration of the fixed-end counts N^trop.
// ---------------------------------------------------------------------------

/// One fixed-position unbounded incoming edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncomingEdge {
    /// Primitive direction of the edge (pointing toward the interior).
    pub direction: BoundaryVector,
    pub weight: u64,
    /// A point on the fixed line carrying the edge.
    pub base: Point,
}

/// Rooted binary tree over leaf indices.
#[derive(Debug, Clone)]
enum Tree {
    Leaf(usize),
    Join(Box<Tree>, Box<Tree>),
}

/// All rooted binary topologies over `n` labeled leaves, built by
/// successive leaf insertion into every edge: `(2n−3)!!` trees.
fn all_topologies(n: usize) -> Vec<Tree> {
    assert!(n >= 2);
    let mut trees = vec![Tree::Join(Box::new(Tree::Leaf(0)), Box::new(Tree::Leaf(1)))];
    for leaf in 2..n {
        let mut next = Vec::new();
        for t in &trees {
            let slots = count_nodes(t);
            for slot in 0..slots {
                let mut counter = 0;
                next.push(insert_at(t, leaf, slot, &mut counter));
            }
        }
        trees = next;
    }
    trees
}

fn count_nodes(t: &Tree) -> usize {
    match t {
        Tree::Leaf(_) => 1,
        Tree::Join(a, b) => 1 + count_nodes(a) + count_nodes(b),
    }
}

/// Replace the `slot`-th node (preorder) `S` by `Join(S, Leaf(leaf))`.
fn insert_at(t: &Tree, leaf: usize, slot: usize, counter: &mut usize) -> Tree {
    let here = *counter;
    *counter += 1;
    if here == slot {
        return Tree::Join(Box::new(t.clone()), Box::new(Tree::Leaf(leaf)));
    }
    match t {
        Tree::Leaf(i) => Tree::Leaf(*i),
        Tree::Join(a, b) => {
            let a2 = insert_at(a, leaf, slot, counter);
            let b2 = insert_at(b, leaf, slot, counter);
            Tree::Join(Box::new(a2), Box::new(b2))
        }
    }
}

/// Exact solve of `A x = b` by Gaussian elimination; `None` if singular.
fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
            let sub = &factor * &b[col];
            b[r] -= sub;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

struct FlatNode {
    // Leaf(edge index) or Join(left flat id, right flat id)
    leaf: Option<usize>,
    children: Option<(usize, usize)>,
    class: BoundaryVector,
    /// Row index of this join vertex in the unknown vector (joins only).
    unknown: usize,
}

fn flatten(t: &Tree, edges: &[IncomingEdge], nodes: &mut Vec<FlatNode>) -> usize {
    match t {
        Tree::Leaf(i) => {
            let class = edges[*i].weight as i64 * edges[*i].direction;
            nodes.push(FlatNode { leaf: Some(*i), children: None, class, unknown: usize::MAX });
            nodes.len() - 1
        }
        Tree::Join(a, b) => {
            let ia = flatten(a, edges, nodes);
            let ib = flatten(b, edges, nodes);
            let class = nodes[ia].class + nodes[ib].class;
            nodes.push(FlatNode { leaf: None, children: Some((ia, ib)), class, unknown: usize::MAX });
            nodes.len() - 1
        }
    }
}

/// The weighted count of trivalent tropical curves with the given fixed
/// incoming unbounded edges and a free outgoing end: sum over binary
/// topologies of the product of vertex multiplicities, keeping only
/// topologies whose exact position system embeds with positive edge
/// lengths.
pub fn enumerate_ntrop(edges: &[IncomingEdge]) -> Result<i64, TropicalError> {
    for e in edges {
        if !e.direction.is_primitive() {
            return Err(TropicalError::NonPrimitiveDirection(e.direction));
        }
        if e.weight == 0 {
            return Err(TropicalError::ZeroWeight);
        }
    }
    let total: u64 = edges.iter().map(|e| e.weight).sum();
    const BOUND: u64 = 8;
    if total > BOUND {
        return Err(TropicalError::WeightBound(total, BOUND));
    }
    if edges.len() < 2 {
        return Ok(0);
    }
    let mut count = 0i64;
    'topology: for t in all_topologies(edges.len()) {
        let mut nodes = Vec::new();
        let root = flatten(&t, edges, &mut nodes);
        // multiplicity first: parallel joins contribute nothing
        let mut mult = 1i64;
        for n in &nodes {
            if let Some((a, b)) = n.children {
                let m = sympl_pairing(nodes[a].class, nodes[b].class).abs();
                if m == 0 {
                    continue 'topology;
                }
                mult *= m;
            }
        }
        // unknowns: positions of join vertices
        let joins: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].leaf.is_none()).collect();
        for (u, &i) in joins.iter().enumerate() {
            nodes[i].unknown = u;
        }
        let dim = 2 * joins.len();
        let mut a = vec![vec![Rat::zero(); dim]; 0];
        let mut b = Vec::new();
        // leaf-line constraints: parent join lies on the leaf's fixed line
        for &i in &joins {
            let (l, r) = nodes[i].children.unwrap();
            for child in [l, r] {
                let row_base = nodes[i].unknown;
                if let Some(edge_idx) = nodes[child].leaf {
                    let e = &edges[edge_idx];
                    let mut row = vec![Rat::zero(); dim];
                    row[2 * row_base] = rint(e.direction.b);
                    row[2 * row_base + 1] = rint(-e.direction.a);
                    a.push(row);
                    b.push(&e.base.x * rint(e.direction.b) - &e.base.y * rint(e.direction.a));
                } else {
                    // internal edge: parent − child parallel to child's class
                    let c = nodes[child].class;
                    let cu = nodes[child].unknown;
                    let mut row = vec![Rat::zero(); dim];
                    row[2 * row_base] = rint(c.b);
                    row[2 * row_base + 1] = rint(-c.a);
                    row[2 * cu] = rint(-c.b);
                    row[2 * cu + 1] = rint(c.a);
                    a.push(row);
                    b.push(Rat::zero());
                }
            }
        }
        debug_assert_eq!(a.len(), dim);
        let Some(x) = solve_linear(a, b) else {
            return Err(TropicalError::DegeneratePositions(
                "singular position system for a non-degenerate topology".into(),
            ));
        };
        // positivity of every bounded internal edge
        let pos = |i: usize| -> Point {
            let u = nodes[i].unknown;
            Point::new(x[2 * u].clone(), x[2 * u + 1].clone())
        };
        let mut ok = true;
        for &i in &joins {
            if i == root {
                continue;
            }
            // find parent join of i
            let parent = joins
                .iter()
                .copied()
                .find(|&j| {
                    nodes[j].children.map_or(false, |(l, r)| l == i || r == i)
                })
                .expect("non-root join has a parent");
            let c = nodes[i].class;
            let dp = pos(parent);
            let dq = pos(i);
            let s = if c.a != 0 {
                (&dp.x - &dq.x) / rint(c.a)
            } else {
                (&dp.y - &dq.y) / rint(c.b)
            };
            if s.is_zero() {
                return Err(TropicalError::DegeneratePositions(
                    "zero-length bounded edge".into(),
                ));
            }
            if s.is_negative() {
                ok = false;
                break;
            }
        }
        if ok {
            count += mult;
        }
    }
    Ok(count)
}

/// Deterministic generic line bases: the `k`-th leaf line in direction `m`
/// passes through a point of a rational parabola, shifted by `variant`.
pub fn generic_bases(dirs_weights: &[(BoundaryVector, &[u64])], variant: i64) -> Vec<IncomingEdge> {
    let mut out = Vec::new();
    let mut k = 1i64;
    for (m, ws) in dirs_weights {
        for w in *ws {
            let t = rint(k) + Rat::new(variant.into(), 17.into());
            out.push(IncomingEdge {
                direction: *m,
                weight: *w,
                base: Point::new(t.clone(), &t * &t),
            });
            k += 1;
        }
    }
    out
}

/// `N^trop` for weight vectors over fixed directions, with deterministic
/// generic positions (retrying a few variants if a degenerate arrangement
/// is hit).
pub fn ntrop(dirs: &[BoundaryVector], weights: &[Vec<u64>]) -> Result<i64, TropicalError> {
    let mut last = TropicalError::DegeneratePositions("no attempt".into());
    for variant in 0..7 {
        let paired: Vec<(BoundaryVector, &[u64])> = dirs
            .iter()
            .copied()
            .zip(weights.iter().map(|w| w.as_slice()))
            .collect();
        match enumerate_ntrop(&generic_bases(&paired, variant)) {
            Ok(n) => return Ok(n),
            Err(TropicalError::DegeneratePositions(msg)) => {
                last = TropicalError::DegeneratePositions(msg);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

// ---------------------------------------------------------------------------
// The wall-crossing formula over tropical counts.
// ---------------------------------------------------------------------------

/// One summand of the wall-crossing formula: a choice of weight multisets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcfContribution {
    pub weights: Vec<Vec<u64>>,
    pub ntrop: i64,
    pub aut: u64,
    pub omega_product: Rat,
    pub value: Rat,
}

/// All partitions of `n` into unordered positive parts, each sorted
/// ascending.
pub fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(n: u64, max: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            let mut p = acc.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for part in (1..=max.min(n)).rev() {
            acc.push(part);
            rec(n - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// `|Aut(w)|` of a sorted weight multiset: product of factorials of the
/// repetition counts.
pub fn aut_order(w: &[u64]) -> u64 {
    let mut aut = 1u64;
    let mut i = 0;
    while i < w.len() {
        let mut run = 1u64;
        while i + (run as usize) < w.len() && w[i + run as usize] == w[i] {
            run += 1;
        }
        for r in 2..=run {
            aut *= r;
        }
        i += run as usize;
    }
    aut
}

/// The jump `ΔΩ̃(Σ aᵢγᵢ)` across a wall where the primitive directions
/// `γᵢ` meet: sum over weight multisets of
/// `N^trop(w)/|Aut(w)| · ∏ Ω̃(w_{ij}·γᵢ)`.
pub fn wall_crossing_sum(
    dirs: &[BoundaryVector],
    coeffs: &[u64],
    omega_tilde: &dyn Fn(usize, u64) -> Rat,
) -> Result<(Rat, Vec<WcfContribution>), TropicalError> {
    for d in dirs {
        if !d.is_primitive() {
            return Err(TropicalError::NonPrimitiveDirection(*d));
        }
    }
    let per_dir: Vec<Vec<Vec<u64>>> = coeffs.iter().map(|&a| partitions(a)).collect();
    let mut total = Rat::zero();
    let mut contributions = Vec::new();
    let mut choice = vec![0usize; dirs.len()];
    loop {
        let weights: Vec<Vec<u64>> =
            choice.iter().enumerate().map(|(i, &c)| per_dir[i][c].clone()).collect();
        let n = ntrop(dirs, &weights)?;
        if n != 0 {
            let aut: u64 = weights.iter().map(|w| aut_order(w)).product();
            let mut prod = Rat::one();
            for (i, w) in weights.iter().enumerate() {
                for &wij in w {
                    prod *= omega_tilde(i, wij);
                }
            }
            let value = rint(n) / rint(aut as i64) * &prod;
            total += &value;
            contributions.push(WcfContribution {
                weights,
                ntrop: n,
                aut,
                omega_product: prod,
                value,
            });
        }
        // advance the mixed-radix choice vector
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok((total, contributions));
            }
            choice[i] += 1;
            if choice[i] < per_dir[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
