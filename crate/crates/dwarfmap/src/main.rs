use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [input] = args.as_slice() else {
        eprintln!("usage: wadec-dwarfmap <module.wasm>");
        return ExitCode::from(2);
    };
    let result = std::fs::read(input)
        .map_err(wadec_dwarfmap::DwarfMapError::from)
        .and_then(|bytes| wadec_dwarfmap::extract_offsets(&bytes))
        .and_then(|recs| wadec_dwarfmap::write_jsonl(&recs, std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wadec-dwarfmap: {e}");
            ExitCode::FAILURE
        }
    }
}
