//! SVG and JSON output for portraits.

use super::{PortraitDoc, Role};
use serde_json::{json, Value};
use std::fmt::Write;

const SIZE: f64 = 800.0;
const CENTER: f64 = 400.0;
const RADIUS: f64 = 380.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SvgStyle {
    /// Clip drawing to the closed first quadrant of the disc.
    pub clip_quadrant: bool,
}

/// Fill colour for an equilibrium glyph, keyed by classification label.
pub fn glyph_colour(label: &str) -> &'static str {
    match label {
        "stable-node" | "stable-focus" => "#1f77b4",
        "unstable-node" | "unstable-focus" => "#ff7f0e",
        "saddle" => "#2ca02c",
        "attracting-saddle-node" | "repelling-saddle-node" => "#9467bd",
        "center-candidate" => "#8c564b",
        _ => "#7f7f7f",
    }
}

fn px(d: [f64; 2]) -> (f64, f64) {
    (CENTER + RADIUS * d[0], CENTER - RADIUS * d[1])
}

fn stroke(role: Role) -> (&'static str, &'static str) {
    match role {
        Role::Separatrix => ("#d62728", "1.4"),
        Role::Axis => ("#1f4fd6", "1.2"),
        Role::Generic => ("#555555", "0.6"),
    }
}

pub fn render_svg(doc: &PortraitDoc, style: SvgStyle) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let clip = if style.clip_quadrant {
        let _ = writeln!(
            s,
            r#"<defs><clipPath id="q1"><rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/></clipPath></defs>"#,
            CENTER - 2.0,
            CENTER - RADIUS - 2.0,
            RADIUS + 4.0,
            RADIUS + 4.0
        );
        r#" clip-path="url(#q1)""#
    } else {
        ""
    };
    let _ = writeln!(s, "<g{clip}>");
    let _ = writeln!(
        s,
        r#"<circle cx="{CENTER:.3}" cy="{CENTER:.3}" r="{RADIUS:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.3}" y1="{CENTER:.3}" x2="{:.3}" y2="{CENTER:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##,
        CENTER - RADIUS,
        CENTER + RADIUS
    );
    let _ = writeln!(
        s,
        r##"<line x1="{CENTER:.3}" y1="{:.3}" x2="{CENTER:.3}" y2="{:.3}" stroke="#bbbbbb" stroke-width="0.5"/>"##,
        CENTER - RADIUS,
        CENTER + RADIUS
    );
    for t in &doc.trajectories {
        if t.points.len() < 2 {
            continue;
        }
        let (colour, width) = stroke(t.role);
        let mut d = String::new();
        for (i, p) in t.points.iter().enumerate() {
            let (x, y) = px(*p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="{width}"/>"#
        );
    }
    s.push_str("</g>\n");
    for m in &doc.equilibria {
        let (x, y) = px(m.disc);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="5.000" fill="{}" stroke="black" stroke-width="0.8"><title>{}</title></circle>"#,
            glyph_colour(&m.record.classification),
            m.record
                .label
                .as_deref()
                .unwrap_or(&m.record.classification)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_json(doc: &PortraitDoc) -> Value {
    let trajectories: Vec<Value> = doc
        .trajectories
        .iter()
        .map(|t| {
            json!({
                "seed": t.seed,
                "role": t.role,
                "direction": t.direction,
                "lock": t.lock,
                "points": t.points,
                "reason": t.reason,
            })
        })
        .collect();
    json!({
        "system": doc.system,
        "params": doc.params,
        "regime": doc.regime,
        "quadrant_only": doc.quadrant_only,
        "equilibria": doc.equilibria,
        "trajectories": trajectories,
        "canonical_regions": doc.canonical_regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::MPoly;
    use crate::modelio::PlanarSystem;
    use crate::portrait::{build_portrait, PortraitOptions};

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let sys = PlanarSystem::new(-MPoly::x(), -MPoly::y());
        let opts = PortraitOptions {
            grid: 2,
            tmax: 20.0,
            ..Default::default()
        };
        let a = render_svg(&build_portrait(&sys, &opts).unwrap(), SvgStyle::default());
        let b = render_svg(&build_portrait(&sys, &opts).unwrap(), SvgStyle::default());
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert!(a.contains(glyph_colour("stable-node")));
    }

    #[test]
    fn json_has_schema_keys() {
        let sys = PlanarSystem::new(-MPoly::x(), -MPoly::y());
        let opts = PortraitOptions {
            grid: 1,
            tmax: 5.0,
            ..Default::default()
        };
        let v = render_json(&build_portrait(&sys, &opts).unwrap());
        for k in ["system", "regime", "equilibria", "trajectories"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert!(v["trajectories"][0]["points"].is_array());
    }
}
