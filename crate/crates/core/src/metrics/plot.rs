use std::fmt::Write;

/// Plot data as `x,y,series` rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlotData {
    pub rows: Vec<(f64, f64, String)>,
}

impl PlotData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64, y: f64, series: &str) {
        self.rows.push((x, y, series.to_string()));
    }

    pub fn extend(&mut self, points: impl IntoIterator<Item = (f64, f64)>, series: &str) {
        for (x, y) in points {
            self.push(x, y, series);
        }
    }

    pub fn series(&self, tag: &str) -> impl Iterator<Item = (f64, f64)> + '_ {
        let tag = tag.to_string();
        self.rows.iter().filter(move |r| r.2 == tag).map(|r| (r.0, r.1))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,series\n");
        for (x, y, s) in &self.rows {
            let _ = writeln!(out, "{x},{y},{s}");
        }
        out
    }
}
