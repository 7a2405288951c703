//! Batch front-end: config parsing, per-place reports, the Szpiro sweep,
//! and exit-status policy.

pub mod config;
pub mod report;
pub mod sweep;

pub use config::{ConfigError, Mode, OutputFormat, PlaceSpec, RunConfig};
pub use report::{analyse_place, render, render_csv, render_text, run, OracleOutcome, PlaceReport, RunReport};
pub use sweep::{render_sweep_csv, render_sweep_text, sweep, SweepResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;
pub const EXIT_SZPIRO: i32 = 3;

/// Output text and exit status for a parsed config. An oracle mismatch
/// takes precedence over a Szpiro violation.
pub fn execute(cfg: &RunConfig) -> Result<(String, i32), ConfigError> {
    match cfg.mode {
        Mode::Run => {
            let r = run(cfg)?;
            let out = render(&r, &cfg.field()?, cfg.format);
            let code = if r.oracle_failed() {
                EXIT_ORACLE
            } else if r.szpiro_violated() {
                EXIT_SZPIRO
            } else {
                EXIT_OK
            };
            Ok((out, code))
        }
        Mode::Sweep => {
            let r = sweep(cfg)?;
            let out = match cfg.format {
                OutputFormat::Csv => render_sweep_csv(&r),
                OutputFormat::Text => render_sweep_text(&r, cfg),
            };
            Ok((out, if r.violations() > 0 { EXIT_SZPIRO } else { EXIT_OK }))
        }
    }
}
