//! Static SVG of a planar arrangement: lines, the flag, chamber labels and base points.

use std::fmt::Write;

use hyperpart::exact::lp::{interior_point, StrictConstraint};
use hyperpart::exact::{format_rational, int, to_f64, AffineForm, Rational};
use hyperpart::Analysis;

use crate::report::Labels;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;
const LEVEL_COLORS: [&str; 3] = ["#2b6cb0", "#c05621", "#2f855a"];

struct Frame {
    lo: [Rational; 2],
    hi: [Rational; 2],
}

impl Frame {
    fn around(points: &[Vec<Rational>]) -> Frame {
        let mut lo = [int(-1), int(-1)];
        let mut hi = [int(1), int(1)];
        for (k, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            for p in points {
                if p[k] < *l {
                    *l = p[k].clone();
                }
                if p[k] > *h {
                    *h = p[k].clone();
                }
            }
        }
        let span = {
            let a = &hi[0] - &lo[0];
            let b = &hi[1] - &lo[1];
            if a > b { a } else { b }
        };
        let pad = &span / int(4) + int(1);
        // Square frame, centered on the points.
        let side = &span + &pad * int(2);
        for k in 0..2 {
            let center = (&lo[k] + &hi[k]) / int(2);
            lo[k] = &center - &side / int(2);
            hi[k] = &center + &side / int(2);
        }
        Frame { lo, hi }
    }

    fn box_constraints(&self) -> Vec<StrictConstraint> {
        let mut out = Vec::new();
        for k in 0..2 {
            let mut e = vec![int(0), int(0)];
            e[k] = int(1);
            out.push(StrictConstraint::gt(AffineForm::new(e.clone(), -self.lo[k].clone())));
            e[k] = int(-1);
            out.push(StrictConstraint::gt(AffineForm::new(e, self.hi[k].clone())));
        }
        out
    }

    fn to_screen(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1) = (to_f64(&self.lo[0]), to_f64(&self.hi[0]));
        let (y0, y1) = (to_f64(&self.lo[1]), to_f64(&self.hi[1]));
        let w = SIZE - 2.0 * MARGIN;
        (MARGIN + (x - x0) / (x1 - x0) * w, MARGIN + (y1 - y) / (y1 - y0) * w)
    }

    /// Endpoints of the line `a·x + c = 0` inside the frame.
    fn clip(&self, form: &AffineForm) -> Option<((f64, f64), (f64, f64))> {
        let a = [to_f64(&form.linear()[0]), to_f64(&form.linear()[1])];
        let c = to_f64(form.constant());
        let lo = [to_f64(&self.lo[0]), to_f64(&self.lo[1])];
        let hi = [to_f64(&self.hi[0]), to_f64(&self.hi[1])];
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for x in [lo[0], hi[0]] {
            if a[1] != 0.0 {
                let y = -(a[0] * x + c) / a[1];
                if (lo[1]..=hi[1]).contains(&y) {
                    pts.push((x, y));
                }
            }
        }
        for y in [lo[1], hi[1]] {
            if a[0] != 0.0 {
                let x = -(a[1] * y + c) / a[0];
                if (lo[0]..=hi[0]).contains(&x) {
                    pts.push((x, y));
                }
            }
        }
        pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        let (first, last) = (*pts.first()?, *pts.last()?);
        Some((self.to_screen(first.0, first.1), self.to_screen(last.0, last.1)))
    }
}

pub fn svg(an: &Analysis, labels: &Labels) -> String {
    let arr = &an.arrangement;
    let mut anchors: Vec<Vec<Rational>> = an.poset.flats_of_dim(0).map(|f| f.point.clone()).collect();
    anchors.push(an.flag.subspace(0).point);
    anchors.extend(an.strata.iter().map(|s| s.base_point.clone()));
    let frame = Frame::around(&anchors);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for (i, h) in arr.hyperplanes().iter().enumerate() {
        if let Some(((x1, y1), (x2, y2))) = frame.clip(h) {
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="1.5"/>"#
            );
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="14">{}</text>"#, x2 + 4.0, y2 - 4.0, arr.name(i));
        }
    }
    if let Some(((x1, y1), (x2, y2))) = frame.clip(an.flag.height_form(2)) {
        let _ = writeln!(
            out,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#805ad5" stroke-width="1.5" stroke-dasharray="6 4"/>"##
        );
        let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}" font-size="14" fill="#805ad5">F^1</text>"##, x2 - 28.0, y2 - 6.0);
    }
    let f0 = an.flag.subspace(0).point;
    let (fx, fy) = frame.to_screen(to_f64(&f0[0]), to_f64(&f0[1]));
    let _ = writeln!(out, r##"<circle cx="{fx:.2}" cy="{fy:.2}" r="5" fill="#805ad5"/>"##);
    let _ = writeln!(out, r##"<text x="{:.2}" y="{:.2}" font-size="14" fill="#805ad5">F^0</text>"##, fx + 6.0, fy + 16.0);

    let bounds = frame.box_constraints();
    for s in an.strata.iter() {
        let color = LEVEL_COLORS[s.level.min(LEVEL_COLORS.len() - 1)];
        let (bx, by) = frame.to_screen(to_f64(&s.base_point[0]), to_f64(&s.base_point[1]));
        let _ = writeln!(out, r#"<circle cx="{bx:.2}" cy="{by:.2}" r="3" fill="{color}"/>"#);
        let mut region = an.chamber(s.chamber).constraints(arr);
        region.extend(bounds.iter().cloned());
        if let Ok(Some(p)) = interior_point(2, &region) {
            let (lx, ly) = frame.to_screen(to_f64(&p[0]), to_f64(&p[1]));
            let name = labels.name(&an.chambers, s.chamber);
            let _ = writeln!(
                out,
                r#"<text x="{lx:.2}" y="{ly:.2}" font-size="15" fill="{color}" text-anchor="middle">{name}</text>"#
            );
        }
    }
    for (q, color) in LEVEL_COLORS.iter().enumerate() {
        let members: Vec<String> = an.strata.level(q).iter().map(|s| labels.name(&an.chambers, s.chamber)).collect();
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{:.2}" font-size="12" fill="{color}">ch^{q} = {{{}}}</text>"#,
            SIZE - 8.0 - 14.0 * (2 - q) as f64,
            members.join(", ")
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="20" font-size="11" fill="gray">frame [{}, {}] x [{}, {}]</text>"#,
        format_rational(&frame.lo[0]),
        format_rational(&frame.hi[0]),
        format_rational(&frame.lo[1]),
        format_rational(&frame.hi[1])
    );
    out.push_str("</svg>\n");
    out
}
