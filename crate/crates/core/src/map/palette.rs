//! Cluster colours.
//!
//! Two base palettes of colour-blind-friendly hues: one for the full theme
//! map and a lighter one for excerpt maps, so the two views stay visually
//! distinct. Past the end of a base palette, colours repeat with lightness
//! variation: round `r` mixes the base colour with black or white by the
//! `r`-th entry of [`SHADE_STEPS`].

use serde::{Deserialize, Serialize};

use super::cluster::ClusterTree;

const OVERVIEW: [&str; 9] = [
    "#332288", "#88CCEE", "#44AA99", "#117733", "#999933", "#DDCC77", "#CC6677", "#882255", "#AA4499",
];

const EXCERPT: [&str; 8] = [
    "#77AADD", "#EE8866", "#44BB99", "#EEDD88", "#FFAABB", "#99DDFF", "#BBCC33", "#AAAA00",
];

/// Per-round mix amount; negative darkens, positive lightens.
pub const SHADE_STEPS: [f64; 17] = [
    0.0, -0.25, 0.3, -0.45, 0.5, -0.6, 0.65, -0.7, 0.75, -0.15, 0.15, -0.35, 0.4, -0.55, 0.6, -0.8, 0.85,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    Overview,
    Excerpt,
}

impl Palette {
    fn base(self) -> &'static [&'static str] {
        match self {
            Palette::Overview => &OVERVIEW,
            Palette::Excerpt => &EXCERPT,
        }
    }

    /// Colour for cluster `index` as `#RRGGBB`.
    pub fn color(self, index: usize) -> String {
        let base = self.base();
        let rgb = parse(base[index % base.len()]);
        let round = index / base.len();
        let t = SHADE_STEPS[round % SHADE_STEPS.len()];
        let target = if t < 0.0 { 0.0 } else { 255.0 };
        let mix = |c: u8| (f64::from(c) + (target - f64::from(c)) * t.abs()).round() as u8;
        format!("#{:02X}{:02X}{:02X}", mix(rgb[0]), mix(rgb[1]), mix(rgb[2]))
    }
}

fn parse(hex: &str) -> [u8; 3] {
    let v = u32::from_str_radix(&hex[1..], 16).expect("palette entries are valid hex");
    [(v >> 16) as u8, (v >> 8) as u8, v as u8]
}

/// One colour per cluster of `tree`, by cluster id.
pub fn assign_colors(tree: &ClusterTree, palette: Palette) -> Vec<String> {
    (0..tree.n_clusters()).map(|c| palette.color(c)).collect()
}
