//! Graph sources: a file in either format, or a named fixture.

use std::path::PathBuf;

use clap::Args;
use semigroupoid::graph::{
    circle, free_semigroup, in_fruit_minimal, loop_and_two_edges, out_fruit_minimal, parallel_edges, parse_graph,
    star_in_tree, two_loops_one_edge, upper_triangle_tree, zigzag, DirectedMultigraph,
};

use crate::CliError;

#[derive(Args, Clone, Debug)]
pub struct GraphArgs {
    /// Graph file, text or JSON.
    #[arg(long, conflicts_with = "graph")]
    pub input: Option<PathBuf>,
    /// Named fixture: circleN, zigzagN, starN, lineN, parallelN, freeN,
    /// 2v-2l-1e, 3v-1l-2e, in-fruit, out-fruit.
    #[arg(long)]
    pub graph: Option<String>,
}

impl GraphArgs {
    pub fn describe(&self) -> String {
        self.describe_or("")
    }

    /// The source as given, or `default` when none was.
    pub fn describe_or(&self, default: &str) -> String {
        match (&self.input, &self.graph) {
            (Some(p), _) => format!("file:{}", p.display()),
            (None, Some(name)) => name.clone(),
            (None, None) => default.to_string(),
        }
    }

    pub fn load(&self) -> Result<DirectedMultigraph, CliError> {
        match (&self.input, &self.graph) {
            (Some(p), _) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::io(format!("cannot read {}: {e}", p.display())))?;
                parse_graph(&text).map_err(CliError::from)
            }
            (None, Some(name)) => named(name),
            (None, None) => Err(CliError::usage("one of --input or --graph is required")),
        }
    }

    /// Like `load`, falling back to `default` when no source was given.
    pub fn load_or(&self, default: impl FnOnce() -> DirectedMultigraph) -> Result<DirectedMultigraph, CliError> {
        if self.input.is_none() && self.graph.is_none() {
            Ok(default())
        } else {
            self.load()
        }
    }
}

pub fn named(name: &str) -> Result<DirectedMultigraph, CliError> {
    let sized = |prefix: &str, min: usize| -> Option<Result<usize, CliError>> {
        let digits = name.strip_prefix(prefix)?;
        Some(match digits.parse::<usize>() {
            Ok(n) if n >= min => Ok(n),
            _ => Err(CliError::usage(format!("`{name}` needs a size of at least {min}"))),
        })
    };
    let fixed = match name {
        "2v-2l-1e" => Some(two_loops_one_edge()),
        "3v-1l-2e" => Some(loop_and_two_edges()),
        "in-fruit" => Some(in_fruit_minimal()),
        "out-fruit" => Some(out_fruit_minimal()),
        _ => None,
    };
    if let Some(g) = fixed {
        return Ok(g);
    }
    let families: [(&str, usize, fn(usize) -> DirectedMultigraph); 6] = [
        ("circle", 1, circle),
        ("zigzag", 2, zigzag),
        ("star", 1, star_in_tree),
        ("line", 2, upper_triangle_tree),
        ("parallel", 1, parallel_edges),
        ("free", 1, free_semigroup),
    ];
    for (prefix, min, build) in families {
        if let Some(n) = sized(prefix, min) {
            let n = n?;
            if prefix == "free" && n > 26 {
                return Err(CliError::usage("free semigroups have at most 26 loops"));
            }
            return Ok(build(n));
        }
    }
    Err(CliError::usage(format!("unknown graph name `{name}`")))
}
