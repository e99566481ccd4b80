//! JSON interchange for scenes, diagrams and tropical discs. All rationals
//! travel as strings `"p/q"` (or `"p"`), never as floats; exports are
//! canonical (sorted keys) so round-trips are byte-identical.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::engine::{Diagram, Ray, Scene, Singularity, SlabTerm, Viewport};
use crate::geom::Point;
use crate::lattice::{BoundaryVector, Refinement};
use crate::novikov::Cutoff;
use crate::tropical::{DiscEdge, DiscVertex, TropicalDisc, VertexImage};
use crate::Rat;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("missing or malformed field {0:?}")]
    Field(&'static str),
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, FormatError> {
    let bad = || FormatError::BadRational(s.to_string());
    match s.split_once('/') {
        None => Ok(Rat::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

fn rat_field(v: &Value, name: &'static str) -> Result<Rat, FormatError> {
    rat_from_str(v.as_str().ok_or(FormatError::Field(name))?)
}

fn point_value(p: &Point) -> Value {
    json!([rat_to_string(&p.x), rat_to_string(&p.y)])
}

fn point_from(v: &Value, name: &'static str) -> Result<Point, FormatError> {
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or(FormatError::Field(name))?;
    Ok(Point::new(rat_field(&arr[0], name)?, rat_field(&arr[1], name)?))
}

fn bv_value(v: BoundaryVector) -> Value {
    json!([v.a, v.b])
}

fn bv_from(v: &Value, name: &'static str) -> Result<BoundaryVector, FormatError> {
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or(FormatError::Field(name))?;
    let a = arr[0].as_i64().ok_or(FormatError::Field(name))?;
    let b = arr[1].as_i64().ok_or(FormatError::Field(name))?;
    Ok(BoundaryVector { a, b })
}

// ---------------------------------------------------------------------------
// Scenes.
// ---------------------------------------------------------------------------

pub fn scene_to_json(scene: &Scene) -> String {
    let mode = match &scene.cutoff {
        Cutoff::Energy(l) => json!({ "energy": rat_to_string(l) }),
        Cutoff::Degree(k) => json!({ "degree": k }),
    };
    let sigma = match scene.sigma {
        Refinement::Default => "default",
        Refinement::Trivial => "trivial",
    };
    let singularities: Vec<Value> = scene
        .singularities
        .iter()
        .map(|s| {
            json!({
                "pos": point_value(&s.pos),
                "direction": bv_value(s.direction),
                "multiplicity": s.multiplicity,
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("epsilon".into(), json!(scene.epsilon));
    obj.insert("mode".into(), mode);
    obj.insert("sigma".into(), json!(sigma));
    obj.insert("singularities".into(), Value::Array(singularities));
    if let Some(vp) = &scene.viewport {
        obj.insert(
            "viewport".into(),
            json!([
                rat_to_string(&vp.xmin),
                rat_to_string(&vp.ymin),
                rat_to_string(&vp.xmax),
                rat_to_string(&vp.ymax)
            ]),
        );
    }
    serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
}

pub fn scene_from_json(text: &str) -> Result<Scene, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let mode = v.get("mode").ok_or(FormatError::Field("mode"))?;
    let cutoff = if let Some(e) = mode.get("energy") {
        Cutoff::Energy(rat_field(e, "mode.energy")?)
    } else if let Some(k) = mode.get("degree") {
        Cutoff::Degree(k.as_u64().ok_or(FormatError::Field("mode.degree"))?)
    } else {
        return Err(FormatError::Field("mode"));
    };
    let epsilon = v
        .get("epsilon")
        .and_then(Value::as_u64)
        .ok_or(FormatError::Field("epsilon"))? as u8;
    let sigma = match v.get("sigma").and_then(Value::as_str) {
        Some("default") | None => Refinement::Default,
        Some("trivial") => Refinement::Trivial,
        Some(_) => return Err(FormatError::Field("sigma")),
    };
    let mut singularities = Vec::new();
    for s in v
        .get("singularities")
        .and_then(Value::as_array)
        .ok_or(FormatError::Field("singularities"))?
    {
        singularities.push(Singularity {
            pos: point_from(s.get("pos").ok_or(FormatError::Field("pos"))?, "pos")?,
            direction: bv_from(
                s.get("direction").ok_or(FormatError::Field("direction"))?,
                "direction",
            )?,
            multiplicity: s
                .get("multiplicity")
                .and_then(Value::as_u64)
                .ok_or(FormatError::Field("multiplicity"))? as u32,
        });
    }
    let viewport = match v.get("viewport") {
        None => None,
        Some(arr) => {
            let a = arr.as_array().filter(|a| a.len() == 4).ok_or(FormatError::Field("viewport"))?;
            Some(Viewport {
                xmin: rat_field(&a[0], "viewport")?,
                ymin: rat_field(&a[1], "viewport")?,
                xmax: rat_field(&a[2], "viewport")?,
                ymax: rat_field(&a[3], "viewport")?,
            })
        }
    };
    Ok(Scene { singularities, cutoff, epsilon, sigma, viewport })
}

// ---------------------------------------------------------------------------
// Diagrams.
// ---------------------------------------------------------------------------

pub fn diagram_to_json(diagram: &Diagram) -> String {
    let rays: Vec<Value> = diagram
        .rays
        .iter()
        .map(|r| {
            let slab: Vec<Value> = r
                .slab
                .iter()
                .map(|t| {
                    json!({
                        "base": rat_to_string(&t.base),
                        "coeff": rat_to_string(&t.coeff),
                        "l": t.l,
                    })
                })
                .collect();
            let parents: Vec<Value> =
                r.provenance.iter().map(|(id, a)| json!([id, a])).collect();
            json!({
                "direction": bv_value(r.direction),
                "generation": r.generation,
                "origin": point_value(&r.origin),
                "parents": parents,
                "slab": slab,
                "unit_base": rat_to_string(&r.unit_base),
            })
        })
        .collect();
    let obj = json!({ "completed": diagram.completed, "rays": rays });
    serde_json::to_string_pretty(&obj).expect("serializable")
}

pub fn diagram_from_json(scene: &Scene, text: &str) -> Result<Diagram, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let completed = v.get("completed").and_then(Value::as_bool).unwrap_or(false);
    let mut rays = Vec::new();
    for r in v.get("rays").and_then(Value::as_array).ok_or(FormatError::Field("rays"))? {
        let mut slab = Vec::new();
        for t in r.get("slab").and_then(Value::as_array).ok_or(FormatError::Field("slab"))? {
            slab.push(SlabTerm {
                coeff: rat_field(t.get("coeff").ok_or(FormatError::Field("coeff"))?, "coeff")?,
                l: t.get("l").and_then(Value::as_i64).ok_or(FormatError::Field("l"))?,
                base: rat_field(t.get("base").ok_or(FormatError::Field("base"))?, "base")?,
            });
        }
        let mut provenance = Vec::new();
        for p in r
            .get("parents")
            .and_then(Value::as_array)
            .ok_or(FormatError::Field("parents"))?
        {
            let pair = p.as_array().filter(|a| a.len() == 2).ok_or(FormatError::Field("parents"))?;
            provenance.push((
                pair[0].as_u64().ok_or(FormatError::Field("parents"))? as usize,
                pair[1].as_i64().ok_or(FormatError::Field("parents"))?,
            ));
        }
        rays.push(Ray {
            origin: point_from(r.get("origin").ok_or(FormatError::Field("origin"))?, "origin")?,
            direction: bv_from(
                r.get("direction").ok_or(FormatError::Field("direction"))?,
                "direction",
            )?,
            slab,
            generation: r
                .get("generation")
                .and_then(Value::as_u64)
                .ok_or(FormatError::Field("generation"))? as u32,
            unit_base: rat_field(
                r.get("unit_base").ok_or(FormatError::Field("unit_base"))?,
                "unit_base",
            )?,
            provenance,
        });
    }
    Ok(Diagram { scene: scene.clone(), rays, completed })
}

// ---------------------------------------------------------------------------
// Tropical discs.
// ---------------------------------------------------------------------------

pub fn disc_to_json(disc: &TropicalDisc) -> String {
    let vertices: Vec<Value> = disc
        .vertices
        .iter()
        .map(|v| match &v.image {
            VertexImage::Interior(p) => json!({ "id": v.id, "pos": point_value(p) }),
            VertexImage::Singularity(k) => json!({ "id": v.id, "pos": format!("sing:{k}") }),
        })
        .collect();
    let edges: Vec<Value> = disc
        .edges
        .iter()
        .map(|e| {
            json!({
                "direction": bv_value(e.direction),
                "from": e.from,
                "to": e.to,
                "weight": e.weight,
            })
        })
        .collect();
    let obj = json!({ "edges": edges, "root": disc.root, "vertices": vertices });
    serde_json::to_string_pretty(&obj).expect("serializable")
}

pub fn disc_from_json(text: &str) -> Result<TropicalDisc, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let mut vertices = Vec::new();
    for w in v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or(FormatError::Field("vertices"))?
    {
        let id = w.get("id").and_then(Value::as_u64).ok_or(FormatError::Field("id"))? as usize;
        let pos = w.get("pos").ok_or(FormatError::Field("pos"))?;
        let image = if let Some(s) = pos.as_str() {
            let k = s
                .strip_prefix("sing:")
                .and_then(|k| k.parse().ok())
                .ok_or(FormatError::Field("pos"))?;
            VertexImage::Singularity(k)
        } else {
            VertexImage::Interior(point_from(pos, "pos")?)
        };
        vertices.push(DiscVertex { id, image });
    }
    let mut edges = Vec::new();
    for e in v.get("edges").and_then(Value::as_array).ok_or(FormatError::Field("edges"))? {
        edges.push(DiscEdge {
            from: e.get("from").and_then(Value::as_u64).ok_or(FormatError::Field("from"))? as usize,
            to: e.get("to").and_then(Value::as_u64).ok_or(FormatError::Field("to"))? as usize,
            weight: e.get("weight").and_then(Value::as_u64).ok_or(FormatError::Field("weight"))?,
            direction: bv_from(
                e.get("direction").ok_or(FormatError::Field("direction"))?,
                "direction",
            )?,
        });
    }
    let root = v.get("root").and_then(Value::as_u64).ok_or(FormatError::Field("root"))? as usize;
    Ok(TropicalDisc { vertices, edges, root })
}
