//! The brute-force reference computations behind `recurrence oracle`.

use recurrence::oracle;

fn main() -> recurrence::Result<()> {
    let queries: [(&str, &[&str]); 6] = [
        ("ball-count", &["F2", "3"]),
        ("kset", &["Z2", "2,0"]),
        ("cone", &["Z", "positive", "2"]),
        ("factor-scan", &["thue-morse", "4"]),
        ("return-scan", &["odometer:3", "2", "30"]),
        ("return-scan", &["one-dot", "1", "10"]),
    ];
    for (sub, args) in queries {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        match oracle::run(sub, &args) {
            Ok(out) => println!("$ oracle {sub} {}\n{out}\n", args.join(" ")),
            Err(e) => println!("$ oracle {sub} {}\nerror: {e}\n", args.join(" ")),
        }
    }
    Ok(())
}
