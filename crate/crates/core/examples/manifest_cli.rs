//! The command layer in-process: a JSON manifest run through `check`,
//! `solve`, `pv` and `galois`, with exit codes and canonical reports.

use idpv::cli::{run_text, Command, Format};
use idpv::manifest::Overrides;

const RADICAND: &str = r#"{
  "field": {"char": 0},
  "base": {"kind": "localized", "inverted": ["t"]},
  "module": {"radicand": {"m": 3, "numerator": "t"}},
  "point": "1",
  "bounds": {"N": 24, "K": 6, "d": 3, "e": 1, "d_z": 3}
}"#;

fn main() {
    for cmd in [Command::Check, Command::Solve, Command::Pv, Command::Galois] {
        let out = run_text(cmd, RADICAND, &Overrides::default());
        println!("--- idpv {} (exit {})", cmd.name(), out.exit_code);
        print!("{}", out.render(Format::Text));
    }
    let bad = Overrides {
        point: Some("0".into()),
        ..Overrides::default()
    };
    let out = run_text(Command::Solve, RADICAND, &bad);
    println!("--- idpv solve --point 0 (exit {})", out.exit_code);
    print!("{}", out.render(Format::Structured));
}
