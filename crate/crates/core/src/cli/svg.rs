//! Static SVG rendering of one falsification run.
//!
//! Elements carry a `class` so the plots can be checked structurally:
//! `arena`, `obstacle` (red), `visited` (gray, one per evaluation),
//! `initial` (green) and `target` (black) for the counterexample start,
//! `successor` for its colliding one-step successor, and `scale-bar`.

use std::fmt::Write;

use crate::falsifier::{RunReport, Scenario, SearchState};

const PX_PER_M: f64 = 150.0;
const MARGIN: f64 = 40.0;
const FOOTER: f64 = 40.0;

struct Frame {
    x_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) * PX_PER_M
    }

    fn y(&self, y: f64) -> f64 {
        MARGIN + (self.y_max - y) * PX_PER_M
    }
}

pub(crate) fn render_run(scenario: &Scenario<f64>, run: &RunReport<f64>) -> String {
    let arena = scenario.map.arena();
    let frame = Frame {
        x_min: arena.x_min,
        y_max: arena.y_max,
    };
    let width = 2.0 * MARGIN + arena.width() * PX_PER_M;
    let height = 2.0 * MARGIN + arena.height() * PX_PER_M + FOOTER;
    let radius_px = scenario.rover.radius * PX_PER_M;

    let mut s = String::new();
    // Writing into a String cannot fail.
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        s,
        r#"<title>{} run {} seed {}</title>"#,
        escape(&scenario.name),
        run.run,
        run.seed
    );
    let _ = writeln!(
        s,
        r#"<rect class="arena" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="white" stroke="black" stroke-width="2"/>"#,
        frame.x(arena.x_min),
        frame.y(arena.y_max),
        arena.width() * PX_PER_M,
        arena.height() * PX_PER_M
    );

    let _ = writeln!(s, r#"<g id="obstacles">"#);
    for o in scenario.map.obstacles() {
        let _ = writeln!(
            s,
            r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="red" fill-opacity="0.8"/>"#,
            frame.x(o.x_min),
            frame.y(o.y_max),
            o.width() * PX_PER_M,
            o.height() * PX_PER_M
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="visited" fill="gray" fill-opacity="0.35">"#);
    for e in &run.result.visited_log {
        let st = SearchState::from_slice(&e.position);
        let _ = writeln!(
            s,
            r#"<circle class="visited" cx="{:.3}" cy="{:.3}" r="1.2"/>"#,
            frame.x(st.x),
            frame.y(st.y)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="counterexample">"#);
    match &run.counterexample {
        Some(c) => {
            let (x0, y0) = (frame.x(c.state.x), frame.y(c.state.y));
            let (x1, y1) = (frame.x(c.successor_pose.x), frame.y(c.successor_pose.y));
            let _ = writeln!(
                s,
                r#"<circle class="body" cx="{x0:.3}" cy="{y0:.3}" r="{radius_px:.3}" fill="none" stroke="green" stroke-dasharray="3,2"/>"#
            );
            let _ = writeln!(
                s,
                r#"<line class="heading" x1="{x0:.3}" y1="{y0:.3}" x2="{:.3}" y2="{:.3}" stroke="green"/>"#,
                x0 + radius_px * c.state.theta.cos(),
                y0 - radius_px * c.state.theta.sin()
            );
            let _ = writeln!(s, r#"<circle class="initial" cx="{x0:.3}" cy="{y0:.3}" r="4" fill="green"/>"#);
            let _ = writeln!(
                s,
                r#"<circle class="target" cx="{:.3}" cy="{:.3}" r="4" fill="black"/>"#,
                frame.x(c.state.x_target),
                frame.y(c.state.y_target)
            );
            let _ = writeln!(
                s,
                r#"<circle class="successor" cx="{x1:.3}" cy="{y1:.3}" r="{radius_px:.3}" fill="none" stroke="darkred" stroke-width="1.5"/>"#
            );
        }
        None => {
            let _ = writeln!(
                s,
                r#"<text class="status" x="{:.3}" y="{:.3}" font-size="14" font-family="sans-serif">no counterexample found</text>"#,
                MARGIN,
                MARGIN - 12.0
            );
        }
    }
    let _ = writeln!(s, "</g>");

    // One-meter scale bar under the arena.
    let bar_y = height - FOOTER / 2.0;
    let _ = writeln!(
        s,
        r#"<line class="scale-bar" x1="{:.3}" y1="{bar_y:.3}" x2="{:.3}" y2="{bar_y:.3}" stroke="black" stroke-width="2"/>"#,
        MARGIN,
        MARGIN + PX_PER_M
    );
    let _ = writeln!(
        s,
        r#"<text class="scale-label" x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">1 m</text>"#,
        MARGIN + PX_PER_M + 6.0,
        bar_y + 4.0
    );
    let _ = writeln!(s, "</svg>");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
