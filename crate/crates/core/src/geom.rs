//! Bounded planar domains built from primitives, with compact excisions.

use alloc::{boxed::Box, format, string::String, vec, vec::Vec};
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent when std is linked
use num_traits::Float;

use crate::util::{circle_hit, seg_dist, seg_hit, SplitMix};
use crate::{pt, Error, Point, Result};

/// Points this close to a polygon edge are treated as outside.
pub const EDGE_EPS: f64 = 1e-12;

/// Default compact-set sampling density, points per unit of diameter.
pub const SAMPLES_PER_UNIT: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub lo: Point,
    pub hi: Point,
}

impl BBox {
    pub fn width(&self) -> f64 {
        self.hi.re - self.lo.re
    }
    pub fn height(&self) -> f64 {
        self.hi.im - self.lo.im
    }
    pub fn center(&self) -> Point {
        (self.lo + self.hi) * 0.5
    }
    pub fn contains_box(&self, other: &BBox) -> bool {
        other.lo.re >= self.lo.re
            && other.lo.im >= self.lo.im
            && other.hi.re <= self.hi.re
            && other.hi.im <= self.hi.im
    }
    fn of_points(ps: impl IntoIterator<Item = Point>) -> Option<BBox> {
        let mut it = ps.into_iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo = pt(lo.re.min(p.re), lo.im.min(p.im));
            hi = pt(hi.re.max(p.re), hi.im.max(p.im));
        }
        Some(BBox { lo, hi })
    }
}

/// A polyline, closed or open. Used to hand curves to the capacity solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        let n = self.points.len();
        let mut s = 0.0;
        for k in 1..n {
            s += (self.points[k] - self.points[k - 1]).norm();
        }
        if self.closed && n > 1 {
            s += (self.points[0] - self.points[n - 1]).norm();
        }
        s
    }

    fn circle(c: Point, r: f64, n: usize, phase: f64) -> Polyline {
        let points = (0..n)
            .map(|k| c + Point::from_polar(r, phase + 2.0 * PI * k as f64 / n as f64))
            .collect();
        Polyline { points, closed: true }
    }

    fn chain(vertices: &[Point], closed: bool, density: f64) -> Polyline {
        let mut points = Vec::new();
        let m = vertices.len();
        let edges = if closed { m } else { m.saturating_sub(1) };
        for e in 0..edges {
            let a = vertices[e];
            let b = vertices[(e + 1) % m];
            let k = (((b - a).norm() * density).ceil() as usize).max(1);
            for j in 0..k {
                points.push(a + (b - a) * (j as f64 / k as f64));
            }
        }
        if !closed {
            if let Some(&last) = vertices.last() {
                points.push(last);
            }
        }
        Polyline { points, closed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompactSet {
    Segment { a: Point, b: Point },
    ClosedDisk { center: Point, radius: f64 },
    Segments(Vec<(Point, Point)>),
    Points(Vec<Point>),
}

impl CompactSet {
    /// The empty set, represented as an empty point cloud.
    pub fn empty() -> Self {
        CompactSet::Points(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            CompactSet::Segments(s) => s.is_empty(),
            CompactSet::Points(p) => p.is_empty(),
            _ => false,
        }
    }

    /// True when the set has logarithmic capacity zero (finite point sets, degenerate segments).
    pub fn is_polar(&self) -> bool {
        match self {
            CompactSet::Segment { a, b } => a == b,
            CompactSet::ClosedDisk { radius, .. } => *radius == 0.0,
            CompactSet::Segments(s) => s.iter().all(|(a, b)| a == b),
            CompactSet::Points(_) => true,
        }
    }

    fn segments(&self) -> Vec<(Point, Point)> {
        match self {
            CompactSet::Segment { a, b } => vec![(*a, *b)],
            CompactSet::Segments(s) => s.clone(),
            _ => Vec::new(),
        }
    }

    pub fn distance(&self, z: Point) -> f64 {
        match self {
            CompactSet::Segment { a, b } => seg_dist(z, *a, *b),
            CompactSet::ClosedDisk { center, radius } => ((z - center).norm() - radius).max(0.0),
            CompactSet::Segments(s) => s.iter().map(|(a, b)| seg_dist(z, *a, *b)).fold(f64::INFINITY, f64::min),
            CompactSet::Points(p) => p.iter().map(|q| (z - q).norm()).fold(f64::INFINITY, f64::min),
        }
    }

    /// Membership predicate. Segments are hit within `EDGE_EPS`.
    pub fn contains(&self, z: Point) -> bool {
        match self {
            CompactSet::ClosedDisk { center, radius } => (z - center).norm() <= *radius,
            CompactSet::Points(p) => p.contains(&z),
            _ => self.distance(z) <= EDGE_EPS,
        }
    }

    pub fn bbox(&self) -> Option<BBox> {
        match self {
            CompactSet::ClosedDisk { center, radius } => Some(BBox {
                lo: center - pt(*radius, *radius),
                hi: center + pt(*radius, *radius),
            }),
            CompactSet::Points(p) => BBox::of_points(p.iter().copied()),
            _ => BBox::of_points(self.segments().into_iter().flat_map(|(a, b)| [a, b])),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            CompactSet::ClosedDisk { radius, .. } => 2.0 * radius,
            CompactSet::Segment { a, b } => (b - a).norm(),
            _ => {
                let pts: Vec<Point> = match self {
                    CompactSet::Points(p) => p.clone(),
                    _ => self.segments().into_iter().flat_map(|(a, b)| [a, b]).collect(),
                };
                let mut d: f64 = 0.0;
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        d = d.max((pts[i] - pts[j]).norm());
                    }
                }
                d
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            CompactSet::ClosedDisk { radius, .. } => PI * radius * radius,
            _ => 0.0,
        }
    }

    /// `n` points covering the set. Closed disks are sampled on their boundary
    /// circle, which is where equilibrium measures live. The seed only rotates
    /// the starting phase of circles; segment and point samples ignore it.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Point> {
        match self {
            CompactSet::Segment { a, b } => segment_points(*a, *b, n),
            CompactSet::ClosedDisk { center, radius } => {
                let phase = 2.0 * PI * SplitMix(seed).next_f64() / n.max(1) as f64;
                (0..n)
                    .map(|k| {
                        let t = phase + 2.0 * PI * k as f64 / n as f64;
                        // rounding may push a boundary sample a hair outside
                        let mut f = 1.0;
                        loop {
                            let p = center + Point::from_polar(radius * f, t);
                            if (p - center).norm() <= *radius {
                                break p;
                            }
                            f -= 4.0 * f64::EPSILON;
                        }
                    })
                    .collect()
            }
            CompactSet::Segments(s) => {
                let total: f64 = s.iter().map(|(a, b)| (b - a).norm()).sum();
                let mut out = Vec::new();
                for (a, b) in s {
                    let k = if total > 0.0 {
                        ((n as f64 * (b - a).norm() / total).round() as usize).max(2)
                    } else {
                        1
                    };
                    out.extend(segment_points(*a, *b, k));
                }
                out
            }
            CompactSet::Points(p) => p.clone(),
        }
    }

    /// Curves carrying the set's outer boundary plus isolated points.
    pub fn outline(&self, density: f64) -> (Vec<Polyline>, Vec<Point>) {
        match self {
            CompactSet::ClosedDisk { center, radius } => {
                if *radius == 0.0 {
                    return (Vec::new(), vec![*center]);
                }
                let n = ((2.0 * PI * radius * density).ceil() as usize).max(16);
                (vec![Polyline::circle(*center, *radius, n, 0.0)], Vec::new())
            }
            CompactSet::Points(p) => (Vec::new(), p.clone()),
            _ => {
                let mut curves = Vec::new();
                let mut pts = Vec::new();
                for (a, b) in self.segments() {
                    if a == b {
                        pts.push(a);
                    } else {
                        curves.push(Polyline::chain(&[a, b], false, density));
                    }
                }
                (curves, pts)
            }
        }
    }

    /// First parameter in (0, 1] where the segment `p -> q` meets the set.
    /// Point clouds are polar and never block.
    pub fn first_hit(&self, p: Point, q: Point) -> Option<f64> {
        match self {
            CompactSet::ClosedDisk { center, radius } => circle_hit(p, q, *center, *radius),
            CompactSet::Points(_) => None,
            _ => self
                .segments()
                .into_iter()
                .filter_map(|(a, b)| seg_hit(p, q, a, b))
                .fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.min(t)))),
        }
    }

    pub fn map(&self, f: &impl Fn(Point) -> Point, scale: f64) -> CompactSet {
        match self {
            CompactSet::Segment { a, b } => CompactSet::Segment { a: f(*a), b: f(*b) },
            CompactSet::ClosedDisk { center, radius } => {
                CompactSet::ClosedDisk { center: f(*center), radius: radius * scale }
            }
            CompactSet::Segments(s) => CompactSet::Segments(s.iter().map(|(a, b)| (f(*a), f(*b))).collect()),
            CompactSet::Points(p) => CompactSet::Points(p.iter().map(|z| f(*z)).collect()),
        }
    }
}

fn segment_points(a: Point, b: Point, n: usize) -> Vec<Point> {
    match n {
        0 => Vec::new(),
        1 => vec![(a + b) * 0.5],
        _ => (0..n).map(|k| a + (b - a) * (k as f64 / (n - 1) as f64)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Disk { center: Point, radius: f64 },
    Annulus { center: Point, r_in: f64, r_out: f64 },
    Rect { lo: Point, hi: Point },
    Polygon { vertices: Vec<Point> },
    Difference { outer: Box<Domain>, excise: CompactSet },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub shape: Shape,
    pub bbox: BBox,
    pub label: String,
}

pub fn make_disk(center: Point, radius: f64) -> Result<Domain> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid(format!("disk radius must be positive, got {radius}")));
    }
    Ok(Domain {
        shape: Shape::Disk { center, radius },
        bbox: BBox { lo: center - pt(radius, radius), hi: center + pt(radius, radius) },
        label: String::from("disk"),
    })
}

pub fn make_annulus(center: Point, r_in: f64, r_out: f64) -> Result<Domain> {
    if !(r_in > 0.0 && r_out > r_in) || !r_out.is_finite() {
        return Err(Error::invalid(format!("annulus needs 0 < r_in < r_out, got {r_in}, {r_out}")));
    }
    Ok(Domain {
        shape: Shape::Annulus { center, r_in, r_out },
        bbox: BBox { lo: center - pt(r_out, r_out), hi: center + pt(r_out, r_out) },
        label: String::from("annulus"),
    })
}

pub fn make_rect(lo: Point, hi: Point) -> Result<Domain> {
    if !(hi.re > lo.re && hi.im > lo.im) || !(hi - lo).norm().is_finite() {
        return Err(Error::invalid("rectangle needs min < max in both coordinates"));
    }
    Ok(Domain { shape: Shape::Rect { lo, hi }, bbox: BBox { lo, hi }, label: String::from("rect") })
}

pub fn make_polygon(vertices: Vec<Point>) -> Result<Domain> {
    if vertices.len() < 3 {
        return Err(Error::invalid("polygon needs at least 3 vertices"));
    }
    if vertices.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::invalid("polygon vertices must be finite"));
    }
    if shoelace(&vertices).abs() == 0.0 {
        return Err(Error::invalid("polygon has zero area"));
    }
    let bbox = BBox::of_points(vertices.iter().copied()).unwrap();
    Ok(Domain { shape: Shape::Polygon { vertices }, bbox, label: String::from("polygon") })
}

/// `Ω ∖ E`. `E` should lie in the closure of `Ω`; anything reaching past the
/// bounding box is rejected.
pub fn subtract_compact(omega: Domain, e: CompactSet) -> Result<Domain> {
    if let Some(b) = e.bbox() {
        let eps = 1e-12 * (1.0 + omega.bbox.width().max(omega.bbox.height()));
        let grown = BBox { lo: omega.bbox.lo - pt(eps, eps), hi: omega.bbox.hi + pt(eps, eps) };
        if !grown.contains_box(&b) {
            return Err(Error::invalid("excised set leaves the domain's bounding box"));
        }
    }
    if let CompactSet::ClosedDisk { radius, .. } = e {
        if !(radius >= 0.0) {
            return Err(Error::invalid("closed disk radius must be nonnegative"));
        }
    }
    let bbox = omega.bbox;
    let label = format!("{}-minus", omega.label);
    Ok(Domain { shape: Shape::Difference { outer: Box::new(omega), excise: e }, bbox, label })
}

fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        s += a.re * b.im - b.re * a.im;
    }
    0.5 * s
}

fn winding(v: &[Point], z: Point) -> i32 {
    let n = v.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let side = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
        if a.im <= z.im {
            if b.im > z.im && side > 0.0 {
                w += 1;
            }
        } else if b.im <= z.im && side < 0.0 {
            w -= 1;
        }
    }
    w
}

impl Domain {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn contains(&self, z: Point) -> bool {
        match &self.shape {
            Shape::Disk { center, radius } => (z - center).norm() < *radius,
            Shape::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                r > *r_in && r < *r_out
            }
            Shape::Rect { lo, hi } => z.re > lo.re && z.re < hi.re && z.im > lo.im && z.im < hi.im,
            Shape::Polygon { vertices } => winding(vertices, z) != 0 && poly_edge_dist(vertices, z) > EDGE_EPS,
            Shape::Difference { outer, excise } => outer.contains(z) && !excise.contains(z),
        }
    }

    /// Distance to the complement; zero outside.
    pub fn boundary_distance(&self, z: Point) -> f64 {
        if !self.contains(z) {
            return 0.0;
        }
        self.boundary_distance_inside(z)
    }

    fn boundary_distance_inside(&self, z: Point) -> f64 {
        match &self.shape {
            Shape::Disk { center, radius } => radius - (z - center).norm(),
            Shape::Annulus { center, r_in, r_out } => {
                let r = (z - center).norm();
                (r_out - r).min(r - r_in)
            }
            Shape::Rect { lo, hi } => (z.re - lo.re).min(hi.re - z.re).min(z.im - lo.im).min(hi.im - z.im),
            Shape::Polygon { vertices } => poly_edge_dist(vertices, z),
            Shape::Difference { outer, excise } => outer.boundary_distance_inside(z).min(excise.distance(z)),
        }
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius, .. } => PI * radius * radius,
            Shape::Annulus { r_in, r_out, .. } => PI * (r_out * r_out - r_in * r_in),
            Shape::Rect { lo, hi } => (hi.re - lo.re) * (hi.im - lo.im),
            Shape::Polygon { vertices } => shoelace(vertices).abs(),
            Shape::Difference { outer, excise } => outer.area() - excise.area(),
        }
    }

    /// Exact for primitives. Excisions lie in the closure of the outer domain
    /// and have empty interior or sit inside it, so they keep its diameter.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius, .. } => 2.0 * radius,
            Shape::Annulus { r_out, .. } => 2.0 * r_out,
            Shape::Rect { lo, hi } => (hi - lo).norm(),
            Shape::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for i in 0..vertices.len() {
                    for j in i + 1..vertices.len() {
                        d = d.max((vertices[i] - vertices[j]).norm());
                    }
                }
                d
            }
            Shape::Difference { outer, .. } => outer.diameter(),
        }
    }

    /// Exact for disks, annuli and rectangles. Otherwise the maximum of the
    /// boundary distance over a 96×96 lattice followed by a local pattern
    /// search, which is a lower approximation.
    pub fn inradius(&self) -> f64 {
        match &self.shape {
            Shape::Disk { radius, .. } => *radius,
            Shape::Annulus { r_in, r_out, .. } => 0.5 * (r_out - r_in),
            Shape::Rect { lo, hi } => 0.5 * (hi.re - lo.re).min(hi.im - lo.im),
            _ => self.inradius_search().0,
        }
    }

    /// Lattice search for the largest inscribed disk; returns (radius, center).
    pub fn inradius_search(&self) -> (f64, Point) {
        const N: usize = 96;
        let b = self.bbox;
        let mut best = (0.0, b.center());
        for i in 0..N {
            for j in 0..N {
                let z = b.lo + pt(b.width() * (i as f64 + 0.5) / N as f64, b.height() * (j as f64 + 0.5) / N as f64);
                let d = self.boundary_distance(z);
                if d > best.0 {
                    best = (d, z);
                }
            }
        }
        let mut step = 0.5 * b.width().max(b.height()) / N as f64;
        while step > 1e-9 * (1.0 + b.width()) {
            let mut moved = false;
            for k in 0..8 {
                let z = best.1 + Point::from_polar(step, k as f64 * core::f64::consts::FRAC_PI_4);
                let d = self.boundary_distance(z);
                if d > best.0 {
                    best = (d, z);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best
    }

    /// Area centroid of the domain.
    pub fn centroid(&self) -> Point {
        match &self.shape {
            Shape::Disk { center, .. } | Shape::Annulus { center, .. } => *center,
            Shape::Rect { lo, hi } => (lo + hi) * 0.5,
            Shape::Polygon { vertices } => {
                let a = shoelace(vertices);
                let n = vertices.len();
                let mut c = pt(0.0, 0.0);
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    let cr = p.re * q.im - q.re * p.im;
                    c += (p + q) * cr;
                }
                c / (6.0 * a)
            }
            Shape::Difference { outer, excise } => {
                let (ao, ae) = (outer.area(), excise.area());
                match excise {
                    CompactSet::ClosedDisk { center, .. } if ae > 0.0 => (outer.centroid() * ao - center * ae) / (ao - ae),
                    _ => outer.centroid(),
                }
            }
        }
    }

    /// Excised compacts along the constructive tree, outermost last.
    pub fn excisions(&self) -> Vec<&CompactSet> {
        match &self.shape {
            Shape::Difference { outer, excise } => {
                let mut v = outer.excisions();
                v.push(excise);
                v
            }
            _ => Vec::new(),
        }
    }

    /// The primitive at the root of the constructive tree.
    pub fn base(&self) -> &Domain {
        match &self.shape {
            Shape::Difference { outer, .. } => outer.base(),
            _ => self,
        }
    }

    /// First parameter `t` in (0, 1] at which `p + t (q - p)` leaves the
    /// domain, for `p` inside. `None` when the whole segment stays inside.
    pub fn first_exit(&self, p: Point, q: Point) -> Option<f64> {
        let min = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        match &self.shape {
            Shape::Disk { center, radius } => circle_hit(p, q, *center, *radius),
            Shape::Annulus { center, r_in, r_out } => {
                min(circle_hit(p, q, *center, *r_out), circle_hit(p, q, *center, *r_in))
            }
            Shape::Rect { lo, hi } => {
                let d = q - p;
                let mut t = f64::INFINITY;
                for (v, dv, l, h) in [(p.re, d.re, lo.re, hi.re), (p.im, d.im, lo.im, hi.im)] {
                    if dv > 0.0 {
                        t = t.min((h - v) / dv);
                    } else if dv < 0.0 {
                        t = t.min((l - v) / dv);
                    }
                }
                (t <= 1.0).then_some(t.max(f64::MIN_POSITIVE))
            }
            Shape::Polygon { vertices } => {
                let n = vertices.len();
                let mut best: Option<f64> = None;
                for i in 0..n {
                    best = min(best, seg_hit(p, q, vertices[i], vertices[(i + 1) % n]));
                }
                best
            }
            Shape::Difference { outer, excise } => min(outer.first_exit(p, q), excise.first_hit(p, q)),
        }
    }

    /// Boundary of the domain as curves and isolated points, with roughly
    /// `density` vertices per unit length.
    pub fn boundary_curves(&self, density: f64) -> (Vec<Polyline>, Vec<Point>) {
        let circle = |c: Point, r: f64| {
            let n = ((2.0 * PI * r * density).ceil() as usize).max(16);
            Polyline::circle(c, r, n, 0.0)
        };
        match &self.shape {
            Shape::Disk { center, radius } => (vec![circle(*center, *radius)], Vec::new()),
            Shape::Annulus { center, r_in, r_out } => (vec![circle(*center, *r_out), circle(*center, *r_in)], Vec::new()),
            Shape::Rect { lo, hi } => {
                let v = [*lo, pt(hi.re, lo.im), *hi, pt(lo.re, hi.im)];
                (vec![Polyline::chain(&v, true, density)], Vec::new())
            }
            Shape::Polygon { vertices } => (vec![Polyline::chain(vertices, true, density)], Vec::new()),
            Shape::Difference { outer, excise } => {
                let (mut c, mut p) = outer.boundary_curves(density);
                let (c2, p2) = excise.outline(density);
                c.extend(c2);
                p.extend(p2);
                (c, p)
            }
        }
    }

    /// Image of the domain under `z ↦ s z + v`, `s > 0`.
    pub fn affine(&self, s: f64, v: Point) -> Domain {
        let f = |z: Point| z * s + v;
        let shape = match &self.shape {
            Shape::Disk { center, radius } => Shape::Disk { center: f(*center), radius: radius * s },
            Shape::Annulus { center, r_in, r_out } => {
                Shape::Annulus { center: f(*center), r_in: r_in * s, r_out: r_out * s }
            }
            Shape::Rect { lo, hi } => Shape::Rect { lo: f(*lo), hi: f(*hi) },
            Shape::Polygon { vertices } => Shape::Polygon { vertices: vertices.iter().map(|z| f(*z)).collect() },
            Shape::Difference { outer, excise } => {
                Shape::Difference { outer: Box::new(outer.affine(s, v)), excise: excise.map(&f, s) }
            }
        };
        Domain { shape, bbox: BBox { lo: f(self.bbox.lo), hi: f(self.bbox.hi) }, label: self.label.clone() }
    }

    pub fn translated(&self, v: Point) -> Domain {
        self.affine(1.0, v)
    }

    pub fn scaled(&self, s: f64) -> Domain {
        self.affine(s, pt(0.0, 0.0))
    }
}

fn poly_edge_dist(v: &[Point], z: Point) -> f64 {
    let n = v.len();
    (0..n).map(|i| seg_dist(z, v[i], v[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Domain {
        make_disk(pt(0.0, 0.0), 1.0).unwrap()
    }

    #[test]
    fn disk_descriptors() {
        let d = unit();
        assert_eq!(d.area(), PI);
        assert_eq!(d.inradius(), 1.0);
        assert_eq!(d.boundary_distance(pt(0.0, 0.0)), 1.0);
        assert!(make_disk(pt(0.0, 0.0), 0.0).is_err());
        assert!(make_disk(pt(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn empty_excision_is_identity() {
        let d = unit();
        let e = subtract_compact(unit(), CompactSet::empty()).unwrap();
        for k in 0..50 {
            let z = pt(-1.2 + 0.05 * k as f64, 0.3 - 0.01 * k as f64);
            assert_eq!(d.contains(z), e.contains(z));
            assert_eq!(d.boundary_distance(z), e.boundary_distance(z));
        }
        assert_eq!(d.area(), e.area());
    }

    #[test]
    fn slit_and_hole_distances() {
        let s = subtract_compact(unit(), CompactSet::Segment { a: pt(-0.5, 0.0), b: pt(0.5, 0.0) }).unwrap();
        let z = pt(0.0, 0.7);
        let to_circle = 1.0 - z.norm();
        let to_seg = 0.7;
        assert!((s.boundary_distance(z) - to_circle.min(to_seg)).abs() < 1e-12);
        let h = subtract_compact(unit(), CompactSet::ClosedDisk { center: pt(0.0, 0.0), radius: 0.1 }).unwrap();
        assert!((h.boundary_distance(pt(0.5, 0.0)) - 0.4).abs() < 1e-12);
        assert!(!h.contains(pt(0.05, 0.0)));
        assert!(!s.contains(pt(0.2, 0.0)));
    }

    #[test]
    fn excision_outside_bbox_rejected() {
        assert!(subtract_compact(unit(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(3.0, 0.0) }).is_err());
    }

    #[test]
    fn annulus_rect_polygon() {
        let a = make_annulus(pt(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!((a.inradius() - 0.25).abs() < 1e-12);
        let r = make_rect(pt(0.0, 0.0), pt(2.0, 1.0)).unwrap();
        assert!((r.diameter() - 5f64.sqrt()).abs() < 1e-15);
        // L-shaped polygon
        let l = make_polygon(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 1.0), pt(1.0, 2.0), pt(0.0, 2.0)]).unwrap();
        assert!((l.area() - 3.0).abs() < 1e-14);
        assert!(l.contains(pt(0.5, 1.5)));
        assert!(!l.contains(pt(1.5, 1.5)));
        // on-edge points are outside
        assert!(!l.contains(pt(1.0, 1.5)));
        // the best disk sits on the diagonal, touching both outer edges and the reflex corner
        let (r_in, _) = l.inradius_search();
        assert!((r_in - (2.0 - 2f64.sqrt())).abs() < 1e-6, "{r_in}");
    }

    #[test]
    fn first_exit_matches_geometry() {
        let d = unit();
        let t = d.first_exit(pt(0.5, 0.0), pt(1.5, 0.0)).unwrap();
        assert!((t - 0.5).abs() < 1e-14);
        assert!(d.first_exit(pt(0.0, 0.0), pt(0.5, 0.0)).is_none());
        let s = subtract_compact(unit(), CompactSet::Segment { a: pt(0.0, 0.0), b: pt(0.75, 0.0) }).unwrap();
        let t = s.first_exit(pt(0.3, -0.1), pt(0.3, 0.3)).unwrap();
        assert!((t - 0.25).abs() < 1e-14);
        let a = make_annulus(pt(0.0, 0.0), 0.5, 1.0).unwrap();
        let t = a.first_exit(pt(0.75, 0.0), pt(0.25, 0.0)).unwrap();
        assert!((t - 0.5).abs() < 1e-14);
    }

    #[test]
    fn samples_satisfy_membership() {
        let sets = [
            CompactSet::Segment { a: pt(-0.3, 0.1), b: pt(0.7, -0.2) },
            CompactSet::ClosedDisk { center: pt(0.1, 0.2), radius: 0.3 },
            CompactSet::Segments(vec![(pt(0.0, 0.0), pt(1.0, 0.0)), (pt(0.0, 0.5), pt(0.0, 1.0))]),
            CompactSet::Points(vec![pt(0.1, 0.1), pt(0.2, 0.3)]),
        ];
        for e in &sets {
            let a = e.sample(100, 7);
            let b = e.sample(100, 7);
            assert_eq!(a, b);
            assert!(a.iter().all(|&z| e.contains(z)));
        }
    }
}
