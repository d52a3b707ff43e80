//! Static SVG rendering of loop configurations on generated graphs. The
//! background shows primal edges solid and dual edges dashed; highlighted
//! chains are drawn on top. Wrap-around edges of torus lattices appear as
//! stubs leaving the fundamental domain on both sides.

use crate::error::{Error, Result};
use crate::homology::{Chain, Side};
use crate::surface::embedding::CellEmbedding;

const SCALE: f64 = 60.0;
const MARGIN: f64 = 40.0;

struct Canvas {
    body: String,
    width: f64,
    height: f64,
}

impl Canvas {
    fn new(width: f64, height: f64) -> Self {
        Canvas {
            body: String::new(),
            width,
            height,
        }
    }
    fn seg(&mut self, a: [f64; 2], b: [f64; 2], style: &str) {
        let t = |p: [f64; 2]| {
            (
                MARGIN + SCALE * p[0],
                // svg y grows downward
                self.height - MARGIN - SCALE * p[1],
            )
        };
        let (x1, y1) = t(a);
        let (x2, y2) = t(b);
        self.body.push_str(&format!(
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" {style}/>\n"
        ));
    }
    fn dot(&mut self, p: [f64; 2], r: f64, fill: &str) {
        let x = MARGIN + SCALE * p[0];
        let y = self.height - MARGIN - SCALE * p[1];
        self.body.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\" fill=\"{fill}\"/>\n"
        ));
    }
    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

/// Segments drawing an edge between two points, shortest path on the
/// periodic domain when periods are given: either one full segment or two
/// stubs leaving opposite sides.
fn edge_segments(
    a: [f64; 2],
    b: [f64; 2],
    periods: Option<(f64, f64)>,
) -> Vec<([f64; 2], [f64; 2])> {
    match periods {
        None => vec![(a, b)],
        Some((px, py)) => {
            let wrap = |d: f64, p: f64| {
                let mut d = (d + p / 2.0).rem_euclid(p) - p / 2.0;
                if d == -p / 2.0 {
                    d = p / 2.0;
                }
                d
            };
            let dx = wrap(b[0] - a[0], px);
            let dy = wrap(b[1] - a[1], py);
            let target = [a[0] + dx, a[1] + dy];
            if (target[0] - b[0]).abs() < 1e-9 && (target[1] - b[1]).abs() < 1e-9 {
                vec![(a, b)]
            } else {
                // crosses the fundamental domain: stub from each endpoint
                vec![
                    (a, [a[0] + 0.45 * dx, a[1] + 0.45 * dy]),
                    (b, [b[0] - 0.45 * dx, b[1] - 0.45 * dy]),
                ]
            }
        }
    }
}

fn periods_of(g: &CellEmbedding) -> Option<(f64, f64)> {
    let kind = g.labels.kind.as_deref()?;
    let args = kind.strip_prefix("torus_square:").or(kind.strip_prefix("torus_triangular:"))?;
    let (m, n) = args.split_once(',')?;
    let m: f64 = m.parse().ok()?;
    let n: f64 = n.parse().ok()?;
    Some((n, m)) // x period = columns, y period = rows
}

/// Render the base lattice with optional highlighted primal and dual chains.
pub fn render_chains(
    g: &CellEmbedding,
    primal: Option<&Chain>,
    dual: Option<&Chain>,
) -> Result<String> {
    let vc = g
        .labels
        .vertex_coords
        .as_ref()
        .ok_or(Error::NoCoordinates)?;
    let fc = g.labels.face_coords.as_ref();
    if let Some(c) = primal {
        assert_eq!(c.side, Side::Primal);
    }
    if let Some(c) = dual {
        assert_eq!(c.side, Side::Dual);
    }
    let periods = periods_of(g);
    let max_x = vc.iter().map(|p| p[0]).fold(0.0, f64::max);
    let max_y = vc.iter().map(|p| p[1]).fold(0.0, f64::max);
    let mut canvas = Canvas::new(2.0 * MARGIN + SCALE * (max_x + 1.0), 2.0 * MARGIN + SCALE * (max_y + 1.0));

    let grey = "stroke=\"#bbbbbb\" stroke-width=\"1.5\"";
    let grey_dashed = "stroke=\"#cccccc\" stroke-width=\"1\" stroke-dasharray=\"4 3\"";
    let red = "stroke=\"#cc2222\" stroke-width=\"4\" stroke-linecap=\"round\"";
    let blue = "stroke=\"#2244cc\" stroke-width=\"3\" stroke-dasharray=\"7 4\" stroke-linecap=\"round\"";

    for e in 0..g.edge_count() {
        let [u, w] = g.edge_endpoints(e);
        for (a, b) in edge_segments(vc[u], vc[w], periods) {
            canvas.seg(a, b, grey);
        }
    }
    if let Some(fc) = fc {
        for e in 0..g.edge_count() {
            let [f1, f2] = g.edge_faces(e);
            for (a, b) in edge_segments(fc[f1], fc[f2], periods) {
                canvas.seg(a, b, grey_dashed);
            }
        }
    }
    if let Some(chain) = primal {
        for e in chain.edges.iter_ones() {
            let [u, w] = g.edge_endpoints(e);
            for (a, b) in edge_segments(vc[u], vc[w], periods) {
                canvas.seg(a, b, red);
            }
        }
    }
    if let Some(chain) = dual {
        let fc = fc.ok_or(Error::NoCoordinates)?;
        for e in chain.edges.iter_ones() {
            let [f1, f2] = g.edge_faces(e);
            for (a, b) in edge_segments(fc[f1], fc[f2], periods) {
                canvas.seg(a, b, blue);
            }
        }
    }
    for p in vc {
        canvas.dot(*p, 3.0, "#333333");
    }
    Ok(canvas.finish())
}
