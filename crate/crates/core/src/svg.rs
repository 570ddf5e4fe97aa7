//! SVG rendering of plane complexes.
//!
//! Each cell is clipped exactly against the bounding box: the box polygon is
//! cut by every constraint of the cell, and the surviving vertices are drawn
//! as a dot, a segment or a polygon. Coordinates are printed with three
//! decimals after exact rounding.

use std::fmt::Write as _;

use num::{Signed, Zero};
use thiserror::Error;

use crate::polyhedra::{HalfSpace, Relation};
use crate::scalar::{format_decimal, int, Rational};
use crate::variety::PolyComplex;

const SIZE: i64 = 400;
const MARGIN: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("plots need ambient dimension 2, got {0}")]
    Dimension(usize),
    #[error("bounding box must satisfy xmin < xmax and ymin < ymax")]
    BoundingBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

impl BoundingBox {
    pub fn new(xmin: Rational, xmax: Rational, ymin: Rational, ymax: Rational) -> Result<Self, SvgError> {
        if xmin >= xmax || ymin >= ymax {
            return Err(SvgError::BoundingBox);
        }
        Ok(BoundingBox { xmin, xmax, ymin, ymax })
    }

    fn corners(&self) -> Vec<[Rational; 2]> {
        vec![
            [self.xmin.clone(), self.ymin.clone()],
            [self.xmax.clone(), self.ymin.clone()],
            [self.xmax.clone(), self.ymax.clone()],
            [self.xmin.clone(), self.ymax.clone()],
        ]
    }

    fn to_screen(&self, p: &[Rational; 2]) -> (String, String) {
        let span = int(SIZE - 2 * MARGIN);
        let sx = int(MARGIN) + (&p[0] - &self.xmin) * &span / (&self.xmax - &self.xmin);
        let sy = int(SIZE - MARGIN) - (&p[1] - &self.ymin) * &span / (&self.ymax - &self.ymin);
        (format_decimal(&sx, 3), format_decimal(&sy, 3))
    }
}

fn side(h: &[Rational], rhs: &Rational, p: &[Rational; 2]) -> Rational {
    &h[0] * &p[0] + &h[1] * &p[1] - rhs
}

/// Cut a convex polygon by `a·p ≤ b`.
fn clip(poly: Vec<[Rational; 2]>, a: &[Rational], b: &Rational) -> Vec<[Rational; 2]> {
    let mut out = Vec::new();
    let k = poly.len();
    for i in 0..k {
        let p = &poly[i];
        let q = &poly[(i + 1) % k];
        let sp = side(a, b, p);
        let sq = side(a, b, q);
        if !sp.is_positive() {
            out.push(p.clone());
        }
        if (sp.is_negative() && sq.is_positive()) || (sp.is_positive() && sq.is_negative()) {
            let t = &sp / (&sp - &sq);
            out.push([&p[0] + &t * (&q[0] - &p[0]), &p[1] + &t * (&q[1] - &p[1])]);
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn clip_cell(constraints: &[HalfSpace], bbox: &BoundingBox) -> Vec<[Rational; 2]> {
    let mut poly = bbox.corners();
    for c in constraints {
        poly = clip(poly, &c.normal, &c.rhs);
        if c.relation == Relation::Eq {
            let neg: Vec<Rational> = c.normal.iter().map(|v| -v).collect();
            poly = clip(poly, &neg, &-c.rhs.clone());
        }
        if poly.is_empty() {
            break;
        }
    }
    let mut uniq: Vec<[Rational; 2]> = Vec::new();
    for p in poly {
        if !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    uniq
}

fn collinear(pts: &[[Rational; 2]]) -> bool {
    let o = &pts[0];
    let d = &pts[1];
    pts.iter().all(|p| ((&d[0] - &o[0]) * (&p[1] - &o[1]) - (&d[1] - &o[1]) * (&p[0] - &o[0])).is_zero())
}

/// Render the torus cells of a complex in `R^2`.
pub fn render_svg(x: &PolyComplex, bbox: &BoundingBox) -> Result<String, SvgError> {
    if x.ambient() != 2 {
        return Err(SvgError::Dimension(x.ambient()));
    }
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let (fx0, fy0) = bbox.to_screen(&[bbox.xmin.clone(), bbox.ymax.clone()]);
    let (fx1, fy1) = bbox.to_screen(&[bbox.xmax.clone(), bbox.ymin.clone()]);
    let _ = writeln!(s, r##"<polygon points="{fx0},{fy0} {fx1},{fy0} {fx1},{fy1} {fx0},{fy1}" fill="none" stroke="#999999"/>"##);
    let zero = Rational::zero();
    if bbox.ymin <= zero && zero <= bbox.ymax {
        let (ax0, ay) = bbox.to_screen(&[bbox.xmin.clone(), zero.clone()]);
        let (ax1, _) = bbox.to_screen(&[bbox.xmax.clone(), zero.clone()]);
        let _ = writeln!(s, r##"<line class="axis" x1="{ax0}" y1="{ay}" x2="{ax1}" y2="{ay}" stroke="#cccccc"/>"##);
    }
    if bbox.xmin <= zero && zero <= bbox.xmax {
        let (ax, ay0) = bbox.to_screen(&[zero.clone(), bbox.ymin.clone()]);
        let (_, ay1) = bbox.to_screen(&[zero.clone(), bbox.ymax.clone()]);
        let _ = writeln!(s, r##"<line class="axis" x1="{ax}" y1="{ay0}" x2="{ax}" y2="{ay1}" stroke="#cccccc"/>"##);
    }
    for cell in x.torus_cells() {
        let pts = clip_cell(cell.polyhedron.constraints(), bbox);
        match pts.len() {
            0 => {}
            1 => {
                let (cx, cy) = bbox.to_screen(&pts[0]);
                let _ = writeln!(s, r#"<circle class="cell" cx="{cx}" cy="{cy}" r="4" fill="black"/>"#);
            }
            _ if collinear(&pts) => {
                let mut sorted = pts.clone();
                sorted.sort();
                let (x1, y1) = bbox.to_screen(&sorted[0]);
                let (x2, y2) = bbox.to_screen(&sorted[sorted.len() - 1]);
                let _ = writeln!(s, r#"<line class="cell" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="2"/>"#);
            }
            _ => {
                let points: Vec<String> = pts
                    .iter()
                    .map(|p| {
                        let (a, b) = bbox.to_screen(p);
                        format!("{a},{b}")
                    })
                    .collect();
                let _ = writeln!(s, r##"<polygon class="cell" points="{}" fill="#dddddd" stroke="black"/>"##, points.join(" "));
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
