//! Deterministic SVG figures: a diagram over its viewport with rays
//! colored by generation, and tropical discs over a scene. All coordinate
//! arithmetic is exact; pixel values are fixed-point decimals derived by
//! integer flooring, so identical inputs give byte-identical output.

use num_traits::{Signed, Zero};

use crate::engine::{Diagram, Scene, Viewport};
use crate::geom::Point;
use crate::tropical::{TropicalDisc, VertexImage};
use crate::{rat, rint, Rat};

const WIDTH: i64 = 800;
const HEIGHT: i64 = 800;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

/// Viewport of the scene, or a padded bounding box of its features.
fn effective_viewport(scene: &Scene, extra: &[Point]) -> Viewport {
    if let Some(vp) = &scene.viewport {
        return vp.clone();
    }
    let mut xs: Vec<Rat> = scene.singularities.iter().map(|s| s.pos.x.clone()).collect();
    let mut ys: Vec<Rat> = scene.singularities.iter().map(|s| s.pos.y.clone()).collect();
    for p in extra {
        xs.push(p.x.clone());
        ys.push(p.y.clone());
    }
    if xs.is_empty() {
        xs.push(Rat::zero());
        ys.push(Rat::zero());
    }
    let pad = rint(3);
    Viewport {
        xmin: xs.iter().min().unwrap() - &pad,
        ymin: ys.iter().min().unwrap() - &pad,
        xmax: xs.iter().max().unwrap() + &pad,
        ymax: ys.iter().max().unwrap() + &pad,
    }
}

/// Exact affine map to pixel coordinates (y flipped), rendered as a
/// fixed-point decimal with three digits.
fn px(value: &Rat) -> String {
    let scaled = (value * rint(1000)).floor().to_integer();
    let (int, frac) = (&scaled / 1000i64, &scaled % 1000i64);
    if frac.is_zero() {
        format!("{int}")
    } else if scaled.is_negative() {
        let pos = -scaled;
        format!("-{}.{:03}", &pos / 1000i64, (&pos % 1000i64))
    } else {
        format!("{int}.{frac:03}")
    }
}

struct Mapper {
    vp: Viewport,
}

impl Mapper {
    fn map(&self, p: &Point) -> (String, String) {
        let w = &self.vp.xmax - &self.vp.xmin;
        let h = &self.vp.ymax - &self.vp.ymin;
        let x = (&p.x - &self.vp.xmin) * rint(WIDTH) / &w;
        let y = rint(HEIGHT) - (&p.y - &self.vp.ymin) * rint(HEIGHT) / &h;
        (px(&x), px(&y))
    }

    fn contains(&self, p: &Point) -> bool {
        p.x >= self.vp.xmin && p.x <= self.vp.xmax && p.y >= self.vp.ymin && p.y <= self.vp.ymax
    }

    /// Largest `t ≥ 0` with `o + t·d` inside the viewport, if any.
    fn exit_param(&self, o: &Point, d: crate::lattice::BoundaryVector) -> Option<Rat> {
        if !self.contains(o) {
            return None;
        }
        let mut t_max: Option<Rat> = None;
        let mut bound = |num: Rat, den: i64| {
            if den == 0 {
                return;
            }
            let t = num / rint(den);
            if t >= Rat::zero() && t_max.as_ref().map_or(true, |m| &t < m) {
                t_max = Some(t);
            }
        };
        if d.a > 0 {
            bound(&self.vp.xmax - &o.x, d.a);
        } else if d.a < 0 {
            bound(&self.vp.xmin - &o.x, d.a);
        }
        if d.b > 0 {
            bound(&self.vp.ymax - &o.y, d.b);
        } else if d.b < 0 {
            bound(&self.vp.ymin - &o.y, d.b);
        }
        t_max
    }
}

fn header(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         fill=\"#ffffff\"/>\n"
    ));
}

fn line(out: &mut String, a: (String, String), b: (String, String), color: &str, width: &str) {
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
        a.0, a.1, b.0, b.1, color, width
    ));
}

/// SVG of a diagram: rays clipped to the viewport, colored by generation,
/// with singularities marked as crosses.
pub fn svg_diagram(diagram: &Diagram) -> String {
    let extra: Vec<Point> = diagram.rays.iter().map(|r| r.origin.clone()).collect();
    let mapper = Mapper { vp: effective_viewport(&diagram.scene, &extra) };
    let mut out = String::new();
    header(&mut out);
    for r in &diagram.rays {
        let Some(t) = mapper.exit_param(&r.origin, r.direction) else { continue };
        let end = r.origin.step(&t, r.direction);
        let color = PALETTE[(r.generation as usize) % PALETTE.len()];
        line(&mut out, mapper.map(&r.origin), mapper.map(&end), color, "2");
    }
    for s in &diagram.scene.singularities {
        let h = rat(1, 10);
        let arms = [
            (s.pos.step(&-&h, crate::lattice::bv(1, 1)), s.pos.step(&h, crate::lattice::bv(1, 1))),
            (s.pos.step(&-&h, crate::lattice::bv(1, -1)), s.pos.step(&h, crate::lattice::bv(1, -1))),
        ];
        for (a, b) in arms {
            line(&mut out, mapper.map(&a), mapper.map(&b), "#000000", "3");
        }
    }
    out.push_str("</svg>\n");
    out
}

/// SVG of a tropical disc drawn over the singularities of a scene.
pub fn svg_disc(scene: &Scene, disc: &TropicalDisc) -> String {
    let pos_of = |img: &VertexImage| -> Option<Point> {
        match img {
            VertexImage::Interior(p) => Some(p.clone()),
            VertexImage::Singularity(k) => scene.singularities.get(*k).map(|s| s.pos.clone()),
        }
    };
    let extra: Vec<Point> = disc.vertices.iter().filter_map(|v| pos_of(&v.image)).collect();
    let mapper = Mapper { vp: effective_viewport(scene, &extra) };
    let mut out = String::new();
    header(&mut out);
    for e in &disc.edges {
        let find = |id: usize| disc.vertices.iter().find(|v| v.id == id);
        let (Some(a), Some(b)) = (find(e.from), find(e.to)) else { continue };
        let (Some(pa), Some(pb)) = (pos_of(&a.image), pos_of(&b.image)) else { continue };
        let width = if e.weight >= 2 { "4" } else { "2" };
        line(&mut out, mapper.map(&pa), mapper.map(&pb), "#2ca02c", width);
    }
    for s in &scene.singularities {
        let h = rat(1, 10);
        let arms = [
            (s.pos.step(&-&h, crate::lattice::bv(1, 1)), s.pos.step(&h, crate::lattice::bv(1, 1))),
            (s.pos.step(&-&h, crate::lattice::bv(1, -1)), s.pos.step(&h, crate::lattice::bv(1, -1))),
        ];
        for (a, b) in arms {
            line(&mut out, mapper.map(&a), mapper.map(&b), "#000000", "3");
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::initial_diagram;
    use crate::scene::scene_from_json;

    fn pentagon() -> Diagram {
        let scene = scene_from_json(
            r#"{
                "mode": {"energy": "8"},
                "epsilon": 1,
                "sigma": "default",
                "singularities": [
                    {"pos": ["-1", "0"], "direction": [1, 0], "multiplicity": 1},
                    {"pos": ["0", "-1"], "direction": [0, 1], "multiplicity": 1}
                ]
            }"#,
        )
        .unwrap();
        initial_diagram(&scene).unwrap().complete().unwrap()
    }

    #[test]
    fn svg_is_deterministic_and_wellformed() {
        let d = pentagon();
        let a = svg_diagram(&d);
        let b = svg_diagram(&d);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("<line"));
        assert!(!a.contains("NaN"));
        // one colored line per ray inside the viewport plus 2 cross arms
        // per singularity
        assert_eq!(a.matches("<line").count(), d.rays.len() + 4);
    }

    #[test]
    fn fixed_point_rendering() {
        assert_eq!(px(&rat(1, 2)), "0.500");
        assert_eq!(px(&rint(400)), "400");
        assert_eq!(px(&rat(-3, 4)), "-0.750");
        assert_eq!(px(&rat(1, 3)), "0.333");
    }
}
