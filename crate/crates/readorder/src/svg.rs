//! Step plot of a projection profile with its valleys shaded.

use std::fmt::Write as _;
use std::path::Path;

use readorder_core::{profile, Axis, Document};

use crate::error::Result;
use crate::io::write_file;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 260.0;
const LEFT: f64 = 50.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 40.0;

/// Renders the profile of `doc` on `axis` as a standalone SVG document.
/// Each valley is one `<rect class="valley">`.
pub fn profile_svg(doc: &Document, axis: Axis) -> Result<String> {
    let prof = profile(doc.tokens(), axis)?;
    let (lo, hi) = (prof.lo(), prof.hi());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let peak = prof.breakpoints().iter().map(|b| b.at.max(b.after)).max().unwrap_or(1).max(1);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |t: f64| LEFT + (t - lo) / span * plot_w;
    let py = |c: usize| TOP + plot_h - c as f64 / peak as f64 * plot_h;

    let name = match axis {
        Axis::Horizontal => "horizontal profile (onto y)",
        Axis::Vertical => "vertical profile (onto x)",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<title>{}: {name}</title>"#, escape(doc.id()));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
    for v in prof.valleys() {
        let _ = writeln!(
            s,
            r##"<rect class="valley" x="{:.2}" y="{TOP:.2}" width="{:.2}" height="{plot_h:.2}" fill="#f6d2cd"/>"##,
            px(v.start),
            px(v.end) - px(v.start)
        );
    }

    let mut path = format!("M {:.2} {:.2}", px(lo), py(0));
    let mut level = 0;
    for b in prof.breakpoints() {
        let x = px(b.position);
        let _ = write!(path, " L {x:.2} {:.2} L {x:.2} {:.2} L {x:.2} {:.2}", py(level), py(b.at), py(b.after));
        level = b.after;
    }
    let _ = writeln!(s, r##"<path class="profile" d="{path}" fill="none" stroke="#1f4e8c" stroke-width="1.5"/>"##);

    let base = py(0);
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="#333333"/>"##,
        WIDTH - RIGHT
    );
    let _ = writeln!(s, r##"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{base:.2}" stroke="#333333"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{peak}</text>"#,
        LEFT - 6.0,
        TOP + 4.0
    );
    let _ =
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">0</text>"#, LEFT - 6.0, base + 4.0);
    let _ = writeln!(s, r#"<text x="{LEFT:.2}" y="{:.2}" font-size="11">{lo}</text>"#, base + 16.0);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{hi}</text>"#,
        WIDTH - RIGHT,
        base + 16.0
    );
    let _ = writeln!(s, r#"<text x="{LEFT:.2}" y="18" font-size="12">{}: {name}</text>"#, escape(doc.id()));
    s.push_str("</svg>\n");
    Ok(s)
}

/// Writes [`profile_svg`] to `out_path`.
pub fn render_profile(doc: &Document, axis: Axis, out_path: &Path) -> Result<()> {
    write_file(out_path, &profile_svg(doc, axis)?)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
