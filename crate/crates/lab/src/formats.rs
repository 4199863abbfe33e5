//! JSON descriptors for domains and compact sets, equilibrium export, field
//! CSV, and the fixed number formatting shared by every report.

use num_complex::Complex64;
use potlab_core::geom::{make_annulus, make_disk, make_polygon, make_rect, subtract_compact, CompactSet, Domain, Shape};
use potlab_core::grid::ScalarField;
use potlab_core::potential::{EquilibriumResult, KernelKind};
use potlab_core::{pt, Point};
use serde::{Deserialize, Serialize};

use crate::LabError;

type Xy = [f64; 2];

fn xy(p: Point) -> Xy {
    [p.re, p.im]
}

fn point(v: Xy) -> Point {
    pt(v[0], v[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainDesc {
    Disk {
        center: Xy,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Annulus {
        center: Xy,
        r_in: f64,
        r_out: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Rect {
        min: Xy,
        max: Xy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Polygon {
        vertices: Vec<Xy>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Difference {
        outer: Box<DomainDesc>,
        excise: CompactDesc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactDesc {
    Segment { a: Xy, b: Xy },
    ClosedDisk { center: Xy, radius: f64 },
    Segments { segments: Vec<[Xy; 2]> },
    Points { points: Vec<Xy> },
}

impl CompactDesc {
    pub fn to_compact(&self) -> CompactSet {
        match self {
            CompactDesc::Segment { a, b } => CompactSet::Segment { a: point(*a), b: point(*b) },
            CompactDesc::ClosedDisk { center, radius } => CompactSet::ClosedDisk { center: point(*center), radius: *radius },
            CompactDesc::Segments { segments } => {
                CompactSet::Segments(segments.iter().map(|s| (point(s[0]), point(s[1]))).collect())
            }
            CompactDesc::Points { points } => CompactSet::Points(points.iter().map(|p| point(*p)).collect()),
        }
    }

    pub fn from_compact(e: &CompactSet) -> Self {
        match e {
            CompactSet::Segment { a, b } => CompactDesc::Segment { a: xy(*a), b: xy(*b) },
            CompactSet::ClosedDisk { center, radius } => CompactDesc::ClosedDisk { center: xy(*center), radius: *radius },
            CompactSet::Segments(v) => CompactDesc::Segments { segments: v.iter().map(|(a, b)| [xy(*a), xy(*b)]).collect() },
            CompactSet::Points(v) => CompactDesc::Points { points: v.iter().map(|p| xy(*p)).collect() },
        }
    }
}

impl DomainDesc {
    pub fn to_domain(&self) -> Result<Domain, LabError> {
        let (d, label) = match self {
            DomainDesc::Disk { center, radius, label } => (make_disk(point(*center), *radius)?, label),
            DomainDesc::Annulus { center, r_in, r_out, label } => (make_annulus(point(*center), *r_in, *r_out)?, label),
            DomainDesc::Rect { min, max, label } => (make_rect(point(*min), point(*max))?, label),
            DomainDesc::Polygon { vertices, label } => (make_polygon(vertices.iter().map(|v| point(*v)).collect())?, label),
            DomainDesc::Difference { outer, excise, label } => (subtract_compact(outer.to_domain()?, excise.to_compact())?, label),
        };
        Ok(match label {
            Some(l) => d.with_label(l.clone()),
            None => d,
        })
    }

    /// Descriptor of a domain; labels equal to the constructor default are left out.
    pub fn from_domain(d: &Domain) -> Self {
        match &d.shape {
            Shape::Disk { center, radius } => {
                DomainDesc::Disk { center: xy(*center), radius: *radius, label: custom(d, "disk".into()) }
            }
            Shape::Annulus { center, r_in, r_out } => DomainDesc::Annulus {
                center: xy(*center),
                r_in: *r_in,
                r_out: *r_out,
                label: custom(d, "annulus".into()),
            },
            Shape::Rect { lo, hi } => DomainDesc::Rect { min: xy(*lo), max: xy(*hi), label: custom(d, "rect".into()) },
            Shape::Polygon { vertices } => DomainDesc::Polygon {
                vertices: vertices.iter().map(|v| xy(*v)).collect(),
                label: custom(d, "polygon".into()),
            },
            Shape::Difference { outer, excise } => DomainDesc::Difference {
                outer: Box::new(DomainDesc::from_domain(outer)),
                excise: CompactDesc::from_compact(excise),
                label: custom(d, format!("{}-minus", outer.label)),
            },
        }
    }
}

fn custom(d: &Domain, default: String) -> Option<String> {
    (d.label != default).then(|| d.label.clone())
}

pub fn parse_domain(text: &str) -> Result<Domain, LabError> {
    let desc: DomainDesc = serde_json::from_str(text).map_err(|e| LabError::Usage(format!("domain descriptor: {e}")))?;
    desc.to_domain()
}

pub fn domain_to_json(d: &Domain) -> String {
    serde_json::to_string(&DomainDesc::from_domain(d)).expect("descriptor serializes")
}

pub fn parse_compact(text: &str) -> Result<CompactSet, LabError> {
    let desc: CompactDesc = serde_json::from_str(text).map_err(|e| LabError::Usage(format!("compact set descriptor: {e}")))?;
    Ok(desc.to_compact())
}

pub fn compact_to_json(e: &CompactSet) -> String {
    serde_json::to_string(&CompactDesc::from_compact(e)).expect("descriptor serializes")
}

/// A corpus file is a JSON array of domain descriptors.
pub fn parse_corpus(text: &str) -> Result<Vec<Domain>, LabError> {
    let descs: Vec<DomainDesc> = serde_json::from_str(text).map_err(|e| LabError::Usage(format!("corpus: {e}")))?;
    if descs.is_empty() {
        return Err(LabError::Usage("corpus is empty".into()));
    }
    descs.iter().map(|d| d.to_domain()).collect()
}

/// C `%.6e`: six fraction digits and an exponent of at least two digits.
pub fn fmt_e(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

/// JSON number in `%.6e`, or `null` when not finite.
pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_e(x)
    } else {
        "null".into()
    }
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

#[derive(Serialize)]
struct EquilibriumJson<'a> {
    kernel: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    disk_center: Option<Xy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    disk_radius: Option<f64>,
    energy: f64,
    capacity: f64,
    converged: bool,
    kkt_residual: f64,
    support: Vec<Xy>,
    weights: Vec<f64>,
}

/// Equilibrium measure as JSON. Energies of polar sets are written as `null`.
pub fn equilibrium_to_json(r: &EquilibriumResult) -> String {
    let (kernel, c, rad) = match r.kernel {
        KernelKind::Logarithmic => ("logarithmic", None, None),
        KernelKind::Green { center, radius } => ("green", Some(xy(center)), Some(radius)),
    };
    let j = EquilibriumJson {
        kernel,
        disk_center: c,
        disk_radius: rad,
        energy: r.energy,
        capacity: r.capacity,
        converged: r.converged,
        kkt_residual: r.kkt_residual,
        support: r.measure.support.iter().map(|p| xy(*p)).collect(),
        weights: r.measure.weights.clone(),
    };
    let mut s = serde_json::to_string_pretty(&j).expect("equilibrium serializes");
    s.push('\n');
    s
}

/// `x,y,value` per masked cell, in cell order.
pub fn field_csv(f: &ScalarField) -> String {
    let mut s = String::from("x,y,value\n");
    for (z, v) in f.grid.centers.iter().zip(&f.values) {
        s += &format!("{},{},{}\n", fmt_e(z.re), fmt_e(z.im), fmt_e(*v));
    }
    s
}

/// `x,y` or `x,y` pairs given on the command line.
pub fn parse_point(s: &str) -> Result<Complex64, LabError> {
    let mut it = s.split(',');
    let parse = |t: Option<&str>| -> Result<f64, LabError> {
        t.and_then(|t| t.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite())
            .ok_or_else(|| LabError::Usage(format!("expected a point `x,y`, got `{s}`")))
    };
    let x = parse(it.next())?;
    let y = parse(it.next())?;
    if it.next().is_some() {
        return Err(LabError::Usage(format!("expected a point `x,y`, got `{s}`")));
    }
    Ok(pt(x, y))
}
