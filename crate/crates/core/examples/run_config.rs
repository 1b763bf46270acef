//! Executes a config in memory and lists the artifacts it would write.

use fraccauchy::app::{execute, Command, Invocation};

const CONFIG: &str = r#"
[problem]
domain = { a = -1.0, b = 1.0, n_grid = 100 }
psi = { kind = "fractional", nu = 1.0 }
alpha = 0.5
horizon = 1.0
n_modes = 60
steps = 50
phi0 = { kind = "cosine_power", power = 2.0, scale = 1.0 }

[[checks]]
id = "positivity"

[[checks]]
id = "decay"
"#;

fn main() -> fraccauchy::Result<()> {
    let inv = Invocation { command: Command::Run, config: Some(CONFIG.into()), inputs: Default::default() };
    let out = execute(&inv)?;
    for line in &out.summary {
        println!("{line}");
    }
    for (name, body) in &out.artifacts {
        println!("{name:<20} {:>8} bytes", body.len());
    }
    println!("exit code {}", out.exit_code);
    Ok(())
}
