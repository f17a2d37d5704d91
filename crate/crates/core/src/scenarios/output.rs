use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{ScenarioResult, SweepSpec, SweepTable};
use crate::error::Result;

pub const CSV_HEADER: &str = "time,pop_sender,pop_receiver,pop_channel,fidelity_avg,fidelity_min,concurrence";

/// Paths written by [`write_results`].
#[derive(Clone, Debug)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub scenario: PathBuf,
    pub gnuplot: PathBuf,
}

/// Writes `<name>.csv`, `<name>.summary.json`, `<name>.scenario.json` and a
/// gnuplot script into `out_dir`, creating it if needed.
pub fn write_results(result: &ScenarioResult, out_dir: impl AsRef<Path>) -> Result<OutputFiles> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    let name = &result.scenario.name;
    let files = OutputFiles {
        csv: dir.join(format!("{name}.csv")),
        summary: dir.join(format!("{name}.summary.json")),
        scenario: dir.join(format!("{name}.scenario.json")),
        gnuplot: dir.join(format!("{name}.gp")),
    };

    let m = &result.metrics;
    let mut csv = String::with_capacity(m.len() * 120);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for i in 0..m.len() {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            m.times[i], m.pop_sender[i], m.pop_receiver[i], m.channel_pop[i], m.f_avg[i], m.f_min[i], m.concurrence[i]
        )
        .expect("writing to a String");
    }
    fs::write(&files.csv, csv)?;
    fs::write(&files.summary, serde_json::to_string_pretty(&result.summary)?)?;
    fs::write(&files.scenario, serde_json::to_string_pretty(&result.scenario)?)?;
    fs::write(&files.gnuplot, gnuplot_script(name, result.scenario.readout_time))?;
    Ok(files)
}

fn gnuplot_script(name: &str, readout: f64) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead outside\n\
         set xlabel 'g_s t'\n\
         set yrange [0:1.05]\n\
         set arrow from {readout},0 to {readout},1.05 nohead dashtype 2\n\
         set terminal pngcairo size 1000,800\n\
         set output '{name}.png'\n\
         set multiplot layout 2,1\n\
         plot '{name}.csv' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines\n\
         plot '{name}.csv' using 1:5 with lines, '' using 1:6 with lines, '' using 1:7 with lines\n\
         unset multiplot\n"
    )
}

/// Writes `<name>.sweep.csv` and `<name>.sweep.json` (spec plus table).
pub fn write_sweep(spec: &SweepSpec, table: &SweepTable, out_dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    let name = &spec.base.name;
    let csv_path = dir.join(format!("{name}.sweep.csv"));
    let json_path = dir.join(format!("{name}.sweep.json"));
    let mut csv = format!("{},fidelity_min,time\n", table.axis);
    for p in &table.points {
        writeln!(csv, "{},{},{}", p.value, p.fidelity_min, p.time).expect("writing to a String");
    }
    fs::write(&csv_path, csv)?;
    let doc = serde_json::json!({ "spec": spec, "table": table });
    fs::write(&json_path, serde_json::to_string_pretty(&doc)?)?;
    Ok((csv_path, json_path))
}
