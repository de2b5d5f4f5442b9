//! Hand-written SVG figures in the complex plane.
//!
//! Coordinates are data coordinates with the imaginary axis flipped. The
//! `viewBox` is the square around the data plus a 5% margin, with a band on
//! top for the legend, so both axes share one scale.

use std::fmt::Write as _;

use crate::model::{EquilibriumCatalog, EquilibriumFamily, Trajectory, C64};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    /// Data length used to size strokes, markers and text.
    unit: f64,
}

impl Frame {
    /// Square data box around `points`, 5% margin on every side, plus a band
    /// above the data for `legend_rows` legend entries.
    fn fit<'a>(points: impl IntoIterator<Item = &'a C64>, legend_rows: usize) -> Frame {
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in points {
            xmin = xmin.min(z.re);
            xmax = xmax.max(z.re);
            ymin = ymin.min(-z.im);
            ymax = ymax.max(-z.im);
        }
        if !xmin.is_finite() {
            (xmin, xmax, ymin, ymax) = (-1.0, 1.0, -1.0, 1.0);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(1e-9);
        let xmin = 0.5 * (xmin + xmax) - 0.5 * span;
        let ymin = 0.5 * (ymin + ymax) - 0.5 * span;
        let margin = 0.05 * span;
        let unit = span / 100.0;
        let band = if legend_rows == 0 {
            0.0
        } else {
            (1.5 + 3.5 * legend_rows as f64) * unit
        };
        Frame {
            x0: xmin - margin,
            y0: ymin - margin - band,
            w: span + 2.0 * margin,
            h: span + 2.0 * margin + band,
            unit,
        }
    }

    fn header(&self, out: &mut String, title: &str) {
        let scale = 640.0 / self.w.max(self.h);
        let (px_w, px_h) = (self.w * scale, self.h * scale);
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px_w:.0}" height="{px_h:.0}" viewBox="{} {} {} {}">"#,
            f(self.x0),
            f(self.y0),
            f(self.w),
            f(self.h)
        )
        .unwrap();
        writeln!(out, "<title>{title}</title>").unwrap();
        writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
            f(self.x0),
            f(self.y0),
            f(self.w),
            f(self.h)
        )
        .unwrap();
    }

    fn axes(&self, out: &mut String) {
        let sw = f(0.15 * self.unit);
        let ax = 0f64.clamp(self.x0, self.x0 + self.w);
        let ay = 0f64.clamp(self.y0, self.y0 + self.h);
        writeln!(out, r##"<g class="axes" stroke="#888888" stroke-width="{sw}">"##).unwrap();
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            f(self.x0),
            f(ay),
            f(self.x0 + self.w),
            f(ay)
        )
        .unwrap();
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            f(ax),
            f(self.y0),
            f(ax),
            f(self.y0 + self.h)
        )
        .unwrap();
        writeln!(out, "</g>").unwrap();
        let fs = f(2.5 * self.unit);
        writeln!(
            out,
            r##"<text x="{}" y="{}" font-size="{fs}" text-anchor="end" fill="#444444">Re z</text>"##,
            f(self.x0 + self.w - self.unit),
            f(ay - self.unit)
        )
        .unwrap();
        writeln!(
            out,
            r##"<text x="{}" y="{}" font-size="{fs}" fill="#444444">Im z</text>"##,
            f(ax + self.unit),
            f(self.y0 + self.h - self.unit)
        )
        .unwrap();
    }

    fn legend(&self, out: &mut String, items: &[(String, &str)]) {
        let fs = 2.5 * self.unit;
        let x = self.x0 + self.unit;
        writeln!(out, r#"<g class="legend" font-size="{}">"#, f(fs)).unwrap();
        for (k, (label, color)) in items.iter().enumerate() {
            let y = self.y0 + (4.0 + 3.5 * k as f64) * self.unit;
            writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"/>"#,
                f(x),
                f(y - 0.8 * self.unit),
                f(x + 5.0 * self.unit),
                f(y - 0.8 * self.unit),
                f(0.6 * self.unit)
            )
            .unwrap();
            writeln!(
                out,
                r#"<text x="{}" y="{}">{label}</text>"#,
                f(x + 6.5 * self.unit),
                f(y)
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }

    fn dot(&self, out: &mut String, z: C64, color: &str, class: &str) {
        writeln!(
            out,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
            f(z.re),
            f(-z.im),
            f(0.9 * self.unit)
        )
        .unwrap();
    }
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// One polyline per particle, plus optional markers at a nearby equilibrium
/// (hollow) and at the initial positions (filled).
pub fn trajectory_svg(traj: &Trajectory, equilibrium: Option<&[C64]>, initial: bool) -> String {
    let n = traj.n();
    let extra = equilibrium.unwrap_or(&[]);
    let frame = Frame::fit(traj.samples.iter().flatten().chain(extra), n);
    let mut out = String::new();
    frame.header(&mut out, "Trajectories in the complex plane");
    frame.axes(&mut out);
    for k in 0..n {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for (i, row) in traj.samples.iter().enumerate() {
            if i > 0 {
                pts.push(' ');
            }
            write!(pts, "{},{}", f(row[k].re), f(-row[k].im)).unwrap();
        }
        writeln!(
            out,
            r#"<polyline class="particle" fill="none" stroke="{color}" stroke-width="{}" stroke-linejoin="round" points="{pts}"/>"#,
            f(0.3 * frame.unit)
        )
        .unwrap();
    }
    for z in extra {
        writeln!(
            out,
            r#"<circle class="equilibrium" cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
            f(z.re),
            f(-z.im),
            f(1.2 * frame.unit),
            f(0.3 * frame.unit)
        )
        .unwrap();
    }
    if initial {
        for k in 0..n {
            frame.dot(&mut out, traj.first()[k], PALETTE[k % PALETTE.len()], "initial");
        }
    }
    let items: Vec<(String, &str)> = (0..n)
        .map(|k| (format!("z{}", k + 1), PALETTE[k % PALETTE.len()]))
        .collect();
    frame.legend(&mut out, &items);
    out.push_str("</svg>\n");
    out
}

/// Every point of every catalog entry, labeled by the entry's 1-based index
/// and colored by family.
pub fn catalog_svg(catalog: &EquilibriumCatalog) -> String {
    let frame = Frame::fit(catalog.entries.iter().flat_map(|e| e.configuration.iter()), 2);
    let color = |fam: EquilibriumFamily| match fam {
        EquilibriumFamily::Real => PALETTE[0],
        EquilibriumFamily::Imaginary => PALETTE[1],
    };
    let mut out = String::new();
    frame.header(&mut out, "Equilibrium configurations");
    frame.axes(&mut out);
    let fs = f(2.2 * frame.unit);
    // entries often share points (the origin, mirrored pairs): one label per
    // distinct point, listing every entry that sits there
    let mut spots: Vec<(C64, Vec<usize>)> = Vec::new();
    for (j, entry) in catalog.entries.iter().enumerate() {
        for z in &entry.configuration {
            frame.dot(&mut out, *z, color(entry.family), "point");
            match spots.iter_mut().find(|(w, _)| (w - z).norm() < 0.5 * frame.unit) {
                Some((_, ids)) => {
                    if !ids.contains(&(j + 1)) {
                        ids.push(j + 1)
                    }
                }
                None => spots.push((*z, vec![j + 1])),
            }
        }
    }
    for (z, ids) in &spots {
        let ids: Vec<String> = ids.iter().map(usize::to_string).collect();
        writeln!(
            out,
            r#"<text class="label" x="{}" y="{}" font-size="{fs}">({})</text>"#,
            f(z.re + 1.2 * frame.unit),
            f(-z.im - 1.2 * frame.unit),
            ids.join(",")
        )
        .unwrap();
    }
    frame.legend(
        &mut out,
        &[
            ("real family".to_string(), color(EquilibriumFamily::Real)),
            ("imaginary family".to_string(), color(EquilibriumFamily::Imaginary)),
        ],
    );
    out.push_str("</svg>\n");
    out
}
