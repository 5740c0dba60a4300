// Driving the command-line front end in process: estimate the entropy of
// a sample file with two estimators.

use qdf_entropy::cli::run;

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("qdf-entropy-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sample.txt");
    std::fs::write(&path, "# four evenly spaced points\n0\n1\n2\n3\n")?;
    let file = path.to_string_lossy().into_owned();

    let mut lines = Vec::new();
    for args in [
        vec!["estimate", &file, "--estimator", "vasicek", "--m", "1"],
        vec!["estimate", &file, "--estimator", "kernel", "--h", "0.3"],
    ] {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qdf-entropy").chain(args), &mut out, &mut err);
        if code != 0 {
            return Err(String::from_utf8(err)?.into());
        }
        lines.push(String::from_utf8(out)?.trim().to_string());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    for line in run_example()? {
        println!("{line}");
    }
    Ok(())
}
