use std::fmt::Write as _;

use clap::CommandFactory;

use crate::args::Cli;

/// Flag reference for every visible subcommand.
pub fn markdown() -> String {
    let mut root = Cli::command();
    root.build();
    let mut out = String::from("# delta-chow flag reference\n\n");
    let _ = writeln!(
        out,
        "```text\n{}\n```\n",
        root.render_long_help().to_string().trim_end()
    );
    for sub in root.get_subcommands().filter(|s| !s.is_hide_set()) {
        let mut sub = sub
            .clone()
            .bin_name(format!("delta-chow {}", sub.get_name()));
        let _ = writeln!(out, "## {}\n", sub.get_name());
        let _ = writeln!(
            out,
            "```text\n{}\n```\n",
            sub.render_long_help().to_string().trim_end()
        );
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}
