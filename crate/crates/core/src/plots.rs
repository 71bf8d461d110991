//! Emission of self-contained gnuplot scripts next to the CSV outputs.
//!
//! Scripts are plain data for a stock plotting tool; nothing in this crate
//! ever executes them.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub enum PlotStyle {
    Lines,
    Points,
    Boxes,
    Steps,
}

impl PlotStyle {
    fn gnuplot(self) -> &'static str {
        match self {
            PlotStyle::Lines => "lines",
            PlotStyle::Points => "points",
            PlotStyle::Boxes => "boxes",
            PlotStyle::Steps => "steps",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    /// Column name for the x axis.
    pub x_col: String,
    /// Column names for the plotted series.
    pub y_cols: Vec<String>,
    pub style: PlotStyle,
}

/// Builds a gnuplot script plotting `y_cols` against `x_col` from `csv_name`.
/// Fails if the CSV content lacks any referenced column.
pub fn emit_plot_script(csv_name: &str, csv_content: &str, spec: &PlotSpec) -> Result<String> {
    let header = csv_content
        .lines()
        .next()
        .ok_or_else(|| Error::config(format!("{csv_name}: empty CSV, nothing to plot")))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let col_index = |name: &str| -> Result<usize> {
        columns
            .iter()
            .position(|c| *c == name)
            .map(|i| i + 1)
            .ok_or_else(|| {
                Error::config(format!(
                    "{csv_name}: missing column '{name}' (have: {header})"
                ))
            })
    };

    let x_idx = col_index(&spec.x_col)?;
    let mut series = Vec::new();
    for y in &spec.y_cols {
        let y_idx = col_index(y)?;
        series.push(format!(
            "'{csv_name}' using {x_idx}:{y_idx} with {} title '{y}'",
            spec.style.gnuplot()
        ));
    }

    Ok(format!(
        "# gnuplot script, generated alongside {csv_name}\n\
         set datafile separator ','\n\
         set key outside\n\
         set grid\n\
         set title '{title}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n\
         plot {series}\n",
        title = spec.title,
        xlabel = spec.xlabel,
        ylabel = spec.ylabel,
        series = series.join(", \\\n     ")
    ))
}
