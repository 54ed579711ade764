//! Critical-difference diagrams: a rank axis with one marker per method and
//! horizontal bars joining groups whose average ranks differ by less than CD.

use crate::error::{Error, Result};
use crate::stats::classify_pairs;

pub struct CdDiagram {
    labels: Vec<String>,
    ranks: Vec<f64>,
    cd: f64,
    alpha: f64,
    /// Maximal sets of methods not separated by the CD, as index lists
    /// sorted by rank.
    groups: Vec<Vec<usize>>,
    /// Method indices ordered best (lowest rank) first.
    order: Vec<usize>,
}

impl CdDiagram {
    pub fn new(labels: &[String], ranks: &[f64], cd: f64, alpha: f64) -> Result<CdDiagram> {
        if labels.len() != ranks.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} ranks",
                labels.len(),
                ranks.len()
            )));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidArgument(
                "a rank diagram needs at least two methods".into(),
            ));
        }
        if !(cd.is_finite() && cd > 0.0) || ranks.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidArgument(
                "ranks and the critical difference must be finite".into(),
            ));
        }
        let (_, groups) = classify_pairs(ranks, cd);
        let mut order: Vec<usize> = (0..ranks.len()).collect();
        order.sort_by(|&a, &b| ranks[a].total_cmp(&ranks[b]));
        Ok(CdDiagram {
            labels: labels.to_vec(),
            ranks: ranks.to_vec(),
            cd,
            alpha,
            groups,
            order,
        })
    }

    fn k(&self) -> usize {
        self.labels.len()
    }

    /// Column of a rank on a text axis spanning `[1, k]` over `width` cells.
    fn text_col(&self, rank: f64, width: usize) -> usize {
        let k = self.k() as f64;
        let frac = (rank - 1.0) / (k - 1.0);
        ((frac * (width - 1) as f64).round() as usize).min(width - 1)
    }

    /// Plain-text rendering for terminals and logs.
    pub fn render_text(&self) -> String {
        const WIDTH: usize = 61;
        let mut out = String::new();
        out.push_str(&format!(
            "CD = {:.4} (alpha = {})\n",
            self.cd, self.alpha
        ));

        // CD ruler anchored at rank 1
        let cd_cells = self.text_col(1.0 + self.cd, WIDTH);
        if cd_cells >= 2 {
            let mut ruler = vec![b' '; WIDTH];
            ruler[0] = b'|';
            ruler[cd_cells] = b'|';
            for c in ruler.iter_mut().take(cd_cells).skip(1) {
                *c = b'-';
            }
            out.push_str(std::str::from_utf8(&ruler).unwrap());
            out.push('\n');
        }

        // axis with integer ticks
        let mut axis = vec![b'-'; WIDTH];
        let mut tick_row = vec![b' '; WIDTH + 4];
        for r in 1..=self.k() {
            let col = self.text_col(r as f64, WIDTH);
            axis[col] = b'+';
            let label = r.to_string();
            for (i, ch) in label.bytes().enumerate() {
                tick_row[col + i] = ch;
            }
        }
        out.push_str(std::str::from_utf8(&axis).unwrap());
        out.push('\n');
        out.push_str(std::str::from_utf8(&tick_row).unwrap().trim_end());
        out.push('\n');

        // group bars before the labels, widest first
        let mut bars: Vec<(usize, usize)> = self
            .groups
            .iter()
            .filter(|g| g.len() > 1)
            .map(|g| {
                let lo = self.text_col(self.ranks[g[0]], WIDTH);
                let hi = self.text_col(self.ranks[*g.last().unwrap()], WIDTH);
                (lo, hi)
            })
            .collect();
        bars.sort_by_key(|&(lo, hi)| (lo, std::cmp::Reverse(hi)));
        for (lo, hi) in bars {
            let mut row = vec![b' '; hi + 1];
            for c in row.iter_mut().take(hi + 1).skip(lo) {
                *c = b'=';
            }
            out.push_str(std::str::from_utf8(&row).unwrap());
            out.push('\n');
        }

        // one line per method, best first
        for &i in &self.order {
            let col = self.text_col(self.ranks[i], WIDTH);
            let mut row = vec![b' '; col + 1];
            row[col] = b'*';
            out.push_str(std::str::from_utf8(&row).unwrap());
            out.push_str(&format!(" {} ({:.4})\n", self.labels[i], self.ranks[i]));
        }
        out
    }

    /// SVG rendering in the usual publication layout: axis on top, label
    /// stems alternating left/right, group bars below the axis.
    pub fn render_svg(&self) -> String {
        let k = self.k();
        let margin = 130.0;
        let axis_w = 420.0_f64;
        let width = axis_w + 2.0 * margin;
        let axis_y = 60.0;
        let bar_gap = 14.0;
        let n_bars = self.groups.iter().filter(|g| g.len() > 1).count();
        let stem_base = axis_y + 20.0 + n_bars as f64 * bar_gap;
        let half = k.div_ceil(2);
        let height = stem_base + half as f64 * 22.0 + 30.0;

        let x_of = |rank: f64| margin + (rank - 1.0) / (k as f64 - 1.0) * axis_w;

        let mut s = String::new();
        s.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
             viewBox=\"0 0 {:.0} {:.0}\" font-family=\"monospace\" font-size=\"12\">\n",
            width, height, width, height
        ));
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{axis_y}\" x2=\"{:.1}\" y2=\"{axis_y}\" stroke=\"black\"/>\n",
            x_of(1.0),
            x_of(k as f64)
        ));
        for r in 1..=k {
            let x = x_of(r as f64);
            s.push_str(&format!(
                "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{axis_y}\" stroke=\"black\"/>\n",
                axis_y - 6.0
            ));
            s.push_str(&format!(
                "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{r}</text>\n",
                axis_y - 10.0
            ));
        }

        // CD ruler above the axis
        let ruler_y = axis_y - 32.0;
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ruler_y}\" x2=\"{:.1}\" y2=\"{ruler_y}\" stroke=\"black\"/>\n",
            x_of(1.0),
            x_of(1.0 + self.cd)
        ));
        for x in [x_of(1.0), x_of(1.0 + self.cd)] {
            s.push_str(&format!(
                "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
                ruler_y - 4.0,
                ruler_y + 4.0
            ));
        }
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">CD = {:.4}</text>\n",
            x_of(1.0 + self.cd / 2.0),
            ruler_y - 8.0,
            self.cd
        ));

        // group bars
        let mut bar_y = axis_y + 14.0;
        for g in self.groups.iter().filter(|g| g.len() > 1) {
            let x1 = x_of(self.ranks[g[0]]) - 3.0;
            let x2 = x_of(self.ranks[*g.last().unwrap()]) + 3.0;
            s.push_str(&format!(
                "<line x1=\"{x1:.1}\" y1=\"{bar_y:.1}\" x2=\"{x2:.1}\" y2=\"{bar_y:.1}\" \
                 stroke=\"black\" stroke-width=\"3.5\"/>\n"
            ));
            bar_y += bar_gap;
        }

        // stems: best half hangs left, the rest right, increasing stem length
        for (pos, &i) in self.order.iter().enumerate() {
            let x = x_of(self.ranks[i]);
            let left = pos < half;
            let depth = if left { pos } else { k - 1 - pos };
            let stem_y = stem_base + depth as f64 * 22.0;
            let label_x = if left { margin - 8.0 } else { margin + axis_w + 8.0 };
            let anchor = if left { "end" } else { "start" };
            s.push_str(&format!(
                "<polyline points=\"{x:.1},{axis_y} {x:.1},{stem_y:.1} {label_x:.1},{stem_y:.1}\" \
                 fill=\"none\" stroke=\"black\"/>\n"
            ));
            s.push_str(&format!(
                "<text x=\"{label_x:.1}\" y=\"{:.1}\" text-anchor=\"{anchor}\">{} ({:.4})</text>\n",
                stem_y - 3.0,
                xml_escape(&self.labels[i]),
                self.ranks[i]
            ));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
