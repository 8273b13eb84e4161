//! Plain-text and SVG pictures of a free module's cohomology.
//!
//! Each generator at `(p, q)` contributes a top cone, drawn from `(p, q)` with
//! `tau` edges straight up and `rho` edges diagonally up and right, and a
//! bottom cone hanging from `theta` at `(p, q - 2)` going down and down-left.
//! Output is a pure function of the generator list.

use std::fmt::Write as _;

use crate::module::FreeModule;
use crate::oracle::Window;
use crate::ring::Bidegree;

/// Pixels per unit of bidegree in SVG output.
pub const SVG_UNIT: i64 = 24;
const SVG_PAD: i64 = 32;

/// Default window: every generator and its `theta`, with a margin of 3.
pub fn default_window(module: &FreeModule) -> Window {
    let pts = module
        .degrees()
        .into_iter()
        .flat_map(|b| [b, b - Bidegree::new(0, 2)])
        .chain([Bidegree::new(0, 0)]);
    Window::around(pts, 3)
}

/// A table of `dim H^{p,q}` with `q` increasing upward. Zero entries print as
/// `.`, and generator positions are listed underneath.
pub fn render_ascii(module: &FreeModule, window: Window) -> String {
    let mut out = String::new();
    let width = [window.p_min, window.p_max]
        .iter()
        .map(|p| p.to_string().len())
        .max()
        .unwrap_or(1)
        .max(2);
    for q in (window.q_min..=window.q_max).rev() {
        let _ = write!(out, "{q:>4} |");
        for p in window.p_min..=window.p_max {
            let d = module.dim(p, q);
            let cell = if d == 0 { ".".to_owned() } else { d.to_string() };
            let _ = write!(out, " {cell:>width$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "     +");
    for _ in window.p_min..=window.p_max {
        out.push_str(&"-".repeat(width + 1));
    }
    out.push('\n');
    let _ = write!(out, "      ");
    for p in window.p_min..=window.p_max {
        let _ = write!(out, " {p:>width$}");
    }
    out.push('\n');
    if module.is_empty() {
        out.push_str("generators: none\n");
    } else {
        out.push_str("generators:");
        for g in module.gens() {
            let _ = write!(out, " {}{}", g.label, g.deg);
        }
        out.push('\n');
    }
    out
}

struct Frame {
    window: Window,
}

impl Frame {
    fn x(&self, p: i64) -> i64 {
        SVG_PAD + (p - self.window.p_min) * SVG_UNIT
    }

    fn y(&self, q: i64) -> i64 {
        SVG_PAD + (self.window.q_max - q) * SVG_UNIT
    }

    fn width(&self) -> i64 {
        2 * SVG_PAD + (self.window.p_max - self.window.p_min) * SVG_UNIT
    }

    fn height(&self) -> i64 {
        2 * SVG_PAD + (self.window.q_max - self.window.q_min) * SVG_UNIT
    }

    /// Clips the ray from `from` along `step` to the window and returns the
    /// last lattice point reached, if the ray moves at all.
    fn ray_end(&self, from: Bidegree, step: Bidegree) -> Option<Bidegree> {
        if !self.window.contains(from) {
            return None;
        }
        let mut at = from;
        while self.window.contains(at + step) {
            at = at + step;
        }
        (at != from).then_some(at)
    }

    fn line(&self, out: &mut String, a: Bidegree, b: Bidegree, class: &str) {
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            self.x(a.p),
            self.y(a.q),
            self.x(b.p),
            self.y(b.q)
        );
    }
}

/// An SVG picture of the cones on the given window. An empty module draws
/// only the axes.
pub fn render_svg(module: &FreeModule, window: Window) -> String {
    let f = Frame { window };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f.width(),
        h = f.height()
    );
    out.push_str(
        "  <style>.axis{stroke:#999;stroke-width:1}.top{stroke:#1f4e9a;stroke-width:2}\
.bottom{stroke:#9a1f1f;stroke-width:2}.gen{fill:#1f4e9a}.theta{fill:#fff;stroke:#9a1f1f;stroke-width:2}\
text{font:10px monospace}</style>\n",
    );
    if (window.q_min..=window.q_max).contains(&0) {
        let _ = writeln!(
            out,
            r#"  <line class="axis" x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
            f.x(window.p_min),
            f.x(window.p_max),
            y = f.y(0)
        );
    }
    if (window.p_min..=window.p_max).contains(&0) {
        let _ = writeln!(
            out,
            r#"  <line class="axis" x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#,
            f.y(window.q_max),
            f.y(window.q_min),
            x = f.x(0)
        );
    }
    for g in module.gens() {
        let top = g.deg;
        for step in [Bidegree::new(0, 1), Bidegree::new(1, 1)] {
            if let Some(end) = f.ray_end(top, step) {
                f.line(&mut out, top, end, "top");
            }
        }
        let theta = g.deg - Bidegree::new(0, 2);
        for step in [Bidegree::new(0, -1), Bidegree::new(-1, -1)] {
            if let Some(end) = f.ray_end(theta, step) {
                f.line(&mut out, theta, end, "bottom");
            }
        }
        if window.contains(top) {
            let _ = writeln!(
                out,
                r#"  <circle class="gen" cx="{}" cy="{}" r="4"/>"#,
                f.x(top.p),
                f.y(top.q)
            );
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}">{}</text>"#,
                f.x(top.p) + 6,
                f.y(top.q) - 6,
                g.label
            );
        }
        if window.contains(theta) {
            let _ = writeln!(
                out,
                r#"  <circle class="theta" cx="{}" cy="{}" r="4"/>"#,
                f.x(theta.p),
                f.y(theta.q)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::Generator;

    fn sample() -> FreeModule {
        FreeModule::new(vec![
            Generator::new("a", Bidegree::new(1, 1)),
            Generator::new("b", Bidegree::new(2, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn ascii_shows_dimensions() {
        let m = sample();
        let w = Window { p_min: 0, p_max: 3, q_min: -1, q_max: 2 };
        let text = render_ascii(&m, w);
        let row1 = text.lines().find(|l| l.trim_start().starts_with("1 |")).unwrap();
        assert_eq!(row1, "   1 |  .  1  1  .");
        assert!(text.ends_with("generators: a(1,1) b(2,1)\n"));
    }

    #[test]
    fn empty_module_draws_axes_only() {
        let m = FreeModule::empty();
        let svg = render_svg(&m, default_window(&m));
        assert_eq!(svg.matches("<line").count(), 2);
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn svg_is_deterministic_and_has_cones() {
        let m = sample();
        let w = default_window(&m);
        let a = render_svg(&m, w);
        assert_eq!(a, render_svg(&m, w));
        assert_eq!(a.matches(r#"class="top""#).count(), 4);
        assert_eq!(a.matches(r#"class="bottom""#).count(), 4);
        assert_eq!(a.matches(r#"class="gen""#).count(), 2);
    }
}
