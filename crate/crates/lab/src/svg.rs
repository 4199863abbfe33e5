//! SVG heatmaps of grid fields with a fixed colour ramp.

use potlab_core::grid::ScalarField;

use crate::formats::fmt_e;

const RAMP: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

fn colour(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * (RAMP.len() - 1) as f64;
    let i = (x.floor() as usize).min(RAMP.len() - 2);
    let f = x - i as f64;
    let c: Vec<u8> = (0..3).map(|k| (RAMP[i][k] + f * (RAMP[i + 1][k] - RAMP[i][k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// `log10` of the value; nonpositive values take the bottom colour.
    Log,
}

/// One `<rect>` per masked cell, 512 px across the longer side, y upwards.
pub fn svg_heatmap(f: &ScalarField, scale: Scale, title: &str) -> String {
    let g = &f.grid;
    let tr = |v: f64| match scale {
        Scale::Linear => v,
        Scale::Log => {
            if v > 0.0 {
                v.log10()
            } else {
                f64::NEG_INFINITY
            }
        }
    };
    let vals: Vec<f64> = f.values.iter().map(|&v| tr(v)).collect();
    let finite = vals.iter().copied().filter(|v| v.is_finite());
    let lo = finite.clone().fold(f64::INFINITY, f64::min);
    let hi = finite.fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let px = 512.0 / (g.nx.max(g.ny) as f64);
    let w = g.nx as f64 * px;
    let h = g.ny as f64 * px;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{:.0}\" viewBox=\"0 0 {w:.3} {:.3}\">\n",
        h + 24.0,
        h + 24.0
    );
    s += &format!("<title>{}</title>\n", escape(title));
    s += &format!("<rect x=\"0\" y=\"0\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"#ffffff\"/>\n");
    for k in 0..g.len() {
        let (i, j) = g.cell_ij(k);
        let x = i as f64 * px;
        let y = (g.ny - 1 - j) as f64 * px;
        let t = (vals[k] - lo) / span;
        s += &format!(
            "<rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{px:.3}\" height=\"{px:.3}\" fill=\"{}\"/>\n",
            colour(t)
        );
    }
    let label = match scale {
        Scale::Linear => format!("min {} max {}", fmt_e(lo), fmt_e(hi)),
        Scale::Log => format!("log10 min {} max {}", fmt_e(lo), fmt_e(hi)),
    };
    s += &format!("<text x=\"4\" y=\"{:.3}\" font-size=\"14\" font-family=\"monospace\">{}</text>\n", h + 18.0, label);
    s += "</svg>\n";
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_ends() {
        assert_eq!(colour(0.0), "#440154");
        assert_eq!(colour(1.0), "#fde725");
        assert_eq!(colour(f64::NAN), "#440154");
    }
}
