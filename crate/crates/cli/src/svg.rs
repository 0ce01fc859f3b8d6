//! Deterministic SVG rendering of the valuation square: the two cutting
//! segments, the region labels, and optional point / orbit overlays. No
//! timestamps, no randomness, integer coordinates only.

use cansub::hecke::{OrbitNode, PrimeData, ValPoint};
use cansub::rat::{floor, rat, rat_int, Rat};

const MARGIN: i64 = 60;
const SIDE: i64 = 520;

fn px(v: &Rat) -> i64 {
    // margin + v * side, rounded half-up, exactly
    let scaled = v.clone() * rat(SIDE, 1) + rat(1, 2);
    MARGIN + i64::try_from(floor(&scaled)).unwrap_or(0)
}

fn py(v: &Rat) -> i64 {
    px(&(rat_int(1) - v.clone()))
}

fn point_xy(q: &ValPoint, prime: usize) -> Option<(i64, i64)> {
    match q.primes.get(prime) {
        Some(PrimeData::Two { nu, .. }) if nu.len() == 2 => Some((px(&nu[0]), py(&nu[1]))),
        _ => None,
    }
}

pub struct SquareStyle {
    pub p: u64,
}

/// Static diagram plus optional marked point and orbit overlay.
pub fn render_square(
    style: &SquareStyle,
    point: Option<&ValPoint>,
    orbit: Option<&OrbitNode>,
    prime: usize,
) -> String {
    let p = style.p as i64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {0} {0}\" width=\"{0}\" height=\"{0}\">\n",
        2 * MARGIN + SIDE
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // unit square
    out.push_str(&format!(
        "<rect x=\"{m}\" y=\"{m}\" width=\"{s}\" height=\"{s}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
        m = MARGIN,
        s = SIDE
    ));
    // axis labels
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"20\">ν1</text>\n",
        MARGIN + SIDE / 2,
        2 * MARGIN + SIDE - 12
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"20\" transform=\"rotate(-90 {} {})\">ν2</text>\n",
        16,
        MARGIN + SIDE / 2,
        16,
        MARGIN + SIDE / 2
    ));
    // segment nu1 + p nu2 = 1 : (0, 1/p) -- (1, 0)
    let inv_p = rat(1, p);
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        px(&rat(0, 1)),
        py(&inv_p),
        px(&rat_int(1)),
        py(&rat(0, 1)),
    ));
    // segment p nu1 + nu2 = 1 : (0, 1) -- (1/p, 0)
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        px(&rat(0, 1)),
        py(&rat_int(1)),
        px(&inv_p),
        py(&rat(0, 1)),
    ));
    // crossing point (1/(p+1), 1/(p+1))
    let cross = rat(1, p + 1);
    out.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"steelblue\"/>\n",
        px(&cross),
        py(&cross)
    ));
    // region labels
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"22\">V_can</text>\n",
        px(&rat(3, 5)),
        py(&rat(3, 5))
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"22\">W</text>\n",
        px(&rat(1, 16)),
        py(&rat(1, 16))
    ));
    if let Some(q) = point {
        if let Some((x, y)) = point_xy(q, prime) {
            out.push_str(&format!(
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"6\" fill=\"crimson\"/>\n"
            ));
        }
    }
    if let Some(tree) = orbit {
        draw_orbit(&mut out, tree, prime);
    }
    out.push_str("</svg>\n");
    out
}

fn draw_orbit(out: &mut String, node: &OrbitNode, prime: usize) {
    let here = point_xy(&node.point, prime);
    if let Some((x, y)) = here {
        out.push_str(&format!(
            "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"crimson\"/>\n"
        ));
        for child in &node.children {
            if let Some((cx, cy)) = point_xy(&child.point, prime) {
                if (cx, cy) == (x, y) {
                    // self-returning branch: a loop marker
                    out.push_str(&format!(
                        "<circle cx=\"{x}\" cy=\"{}\" r=\"9\" fill=\"none\" stroke=\"crimson\" stroke-width=\"1\"/>\n",
                        y - 9
                    ));
                } else {
                    out.push_str(&format!(
                        "<line x1=\"{x}\" y1=\"{y}\" x2=\"{cx}\" y2=\"{cy}\" stroke=\"crimson\" stroke-width=\"1\" marker-end=\"url(#arr)\"/>\n"
                    ));
                }
            }
        }
    }
    for child in &node.children {
        draw_orbit(out, child, prime);
    }
}

pub fn svg_defs_patch(svg: String) -> String {
    // one arrowhead marker definition, inserted when any edge references it
    if svg.contains("url(#arr)") {
        svg.replacen(
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<defs><marker id=\"arr\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"crimson\"/></marker></defs>\n",
            1,
        )
    } else {
        svg
    }
}
