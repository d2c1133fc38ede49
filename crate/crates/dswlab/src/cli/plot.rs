//! Companion gnuplot scripts. Each script is run from the output directory
//! and renders `<stem>.png`.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct Series {
    file: String,
    using: String,
    title: String,
    index: Option<usize>,
    /// Draw on the previous panel of a stacked plot.
    same_panel: bool,
}

impl Series {
    pub fn new(file: &str, using: &str, title: &str) -> Self {
        Series {
            file: file.into(),
            using: using.into(),
            title: title.into(),
            index: None,
            same_panel: false,
        }
    }

    pub fn index(mut self, i: usize) -> Self {
        self.index = Some(i);
        self
    }

    pub fn same_panel(mut self) -> Self {
        self.same_panel = true;
        self
    }

    fn clause(&self, style: &str) -> String {
        let index = self.index.map(|i| format!(" index {i}")).unwrap_or_default();
        format!("'{}'{index} using {} {style} title '{}'", self.file, self.using, self.title)
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub stem: String,
    xlabel: String,
    ylabel: String,
    series: Vec<Series>,
    stacked: bool,
    loglog: bool,
}

impl Plot {
    pub fn new(stem: &str, xlabel: &str, ylabel: &str) -> Self {
        Plot {
            stem: stem.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            series: Vec::new(),
            stacked: false,
            loglog: false,
        }
    }

    pub fn series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    /// One panel per series (multiplot, top to bottom).
    pub fn stacked(mut self) -> Self {
        self.stacked = true;
        self
    }

    /// Log axes and points with a power-law fit per series.
    pub fn loglog(mut self) -> Self {
        self.loglog = true;
        self
    }

    pub fn script(&self) -> String {
        let mut s = String::new();
        let panels: Vec<Vec<&Series>> = self.series.iter().fold(Vec::new(), |mut acc, sr| {
            match acc.last_mut() {
                Some(last) if !self.stacked || sr.same_panel => last.push(sr),
                _ => acc.push(vec![sr]),
            }
            acc
        });
        let height = 300 * panels.len().max(1);
        let _ = writeln!(s, "# gnuplot script; run from this directory: gnuplot {}.gp", self.stem);
        let _ = writeln!(s, "set terminal pngcairo size 1000,{height}");
        let _ = writeln!(s, "set output '{}.png'", self.stem);
        let _ = writeln!(s, "set xlabel '{}'", self.xlabel);
        let _ = writeln!(s, "set ylabel '{}'", self.ylabel);
        let _ = writeln!(s, "set key outside right");
        if self.loglog {
            let _ = writeln!(s, "set logscale xy");
            for (k, sr) in self.series.iter().enumerate() {
                let _ = writeln!(s, "stats '{}' index 1 using 1:2 nooutput", sr.file);
                let _ = writeln!(s, "a{k} = STATS_min_x; b{k} = STATS_min_y");
            }
            let clauses: Vec<String> = self
                .series
                .iter()
                .enumerate()
                .flat_map(|(k, sr)| [sr.clause("with points pt 7"), format!("10**(-b{k}) * x**a{k} with lines notitle")])
                .collect();
            let _ = writeln!(s, "plot {}", clauses.join(", \\\n     "));
            return s;
        }
        if panels.len() > 1 {
            let _ = writeln!(s, "set multiplot layout {},1", panels.len());
        }
        for p in &panels {
            let clauses: Vec<String> = p.iter().map(|sr| sr.clause("with lines")).collect();
            let _ = writeln!(s, "plot {}", clauses.join(", \\\n     "));
        }
        if panels.len() > 1 {
            let _ = writeln!(s, "unset multiplot");
        }
        s
    }
}
