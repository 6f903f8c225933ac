use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "positroidlab", version, about = "Positroids, relabeled plabic graphs, seeds and twists")]
pub struct Cli {
    /// Seed for every sampled point or weight.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Perm(PermCmd),
    #[command(subcommand)]
    Necklace(NecklaceCmd),
    #[command(subcommand)]
    Positroid(PositroidCmd),
    #[command(subcommand)]
    Plabic(PlabicCmd),
    #[command(subcommand)]
    Wsc(WscCmd),
    #[command(subcommand)]
    Seed(SeedCmd),
    #[command(subcommand)]
    Twist(TwistCmd),
    #[command(subcommand)]
    Analysis(AnalysisCmd),
}

#[derive(Subcommand, Debug)]
pub enum PermCmd {
    /// `(k, n)` of a permutation.
    Type { pi: String },
    /// Window of the bounded affine lift.
    Lift { pi: String },
    /// Coxeter length of the lift, or of an explicit window.
    Length {
        pi: Option<String>,
        #[arg(long)]
        window: Option<String>,
    },
    /// Circular weak order `ι ≤_∘ π`.
    Leq { iota: String, pi: String },
}

/// A necklace: forward necklace of `--pi`; `𝒩_{•,ι,π}` from `--pi` and
/// `--iota`; or `𝒩_{ρ,ι}` from `--rho` and `--iota`.
#[derive(Args, Debug, Clone)]
pub struct NecklaceArgs {
    #[arg(long)]
    pub pi: Option<String>,
    #[arg(long)]
    pub rho: Option<String>,
    #[arg(long)]
    pub iota: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum NecklaceCmd {
    Forward { pi: String },
    Reverse {
        pi: String,
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    Grassmannlike {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        iota: String,
    },
    Toggle {
        #[command(flatten)]
        necklace: NecklaceArgs,
        #[arg(long)]
        at: usize,
    },
    /// Toggle class at one position, or at every position.
    Classify {
        #[command(flatten)]
        necklace: NecklaceArgs,
        #[arg(long)]
        at: Option<usize>,
    },
    Dual {
        #[command(flatten)]
        necklace: NecklaceArgs,
    },
    /// Necklace Plückers as Laurent monomials in the forward necklace.
    Units {
        #[arg(long)]
        pi: String,
        #[arg(long)]
        iota: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum PositroidCmd {
    Contains { pi: String, subset: String },
    Enumerate { pi: String },
    Dim { pi: String },
}

/// `gallery:NAME`, `gen:PI`, a JSON file, or `-` for stdin.
#[derive(Args, Debug, Clone)]
pub struct GraphArg {
    #[arg(long)]
    pub graph: String,
}

#[derive(Subcommand, Debug)]
pub enum PlabicCmd {
    /// Reduced plabic graph for a permutation.
    Gen {
        pi: String,
        #[arg(long)]
        dot: bool,
    },
    Trips {
        #[command(flatten)]
        g: GraphArg,
    },
    Faces {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        source: bool,
    },
    Quiver {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        dot: bool,
    },
    Relabel {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        dot: bool,
    },
    SquareMove {
        #[command(flatten)]
        g: GraphArg,
        /// Target label of the face.
        #[arg(long)]
        face: String,
        #[arg(long)]
        dot: bool,
    },
    Reduced {
        #[command(flatten)]
        g: GraphArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum WscCmd {
    Check {
        #[arg(long)]
        n: usize,
        subsets: Vec<String>,
    },
    /// Greedy completion inside the positroid of `--pi`.
    Complete {
        #[arg(long)]
        pi: String,
        subsets: Vec<String>,
    },
    TilingSvg {
        #[arg(long)]
        n: usize,
        subsets: Vec<String>,
        /// Draw the curve of this necklace.
        #[command(flatten)]
        necklace: NecklaceArgs,
    },
    Interior {
        #[command(flatten)]
        necklace: NecklaceArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum SeedCmd {
    FromGraph {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        source: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Mutate along `--seq`, indices as in the seed JSON.
    Mutate {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, value_delimiter = ',')]
        seq: Vec<usize>,
    },
    Closure {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 500)]
        limit: usize,
    },
    QuasiCheck {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    QuasiSearch {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        other: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TwistCmd {
    /// Positive point of the open positroid variety.
    Sample { pi: String },
    /// Boundary measurement with seeded positive weights, or all ones.
    Boundary {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        ones: bool,
    },
    Right {
        #[command(flatten)]
        necklace: NecklaceArgs,
        /// JSON matrix; sampled from the trip permutation if absent.
        #[arg(long)]
        matrix: Option<String>,
    },
    Left {
        #[command(flatten)]
        necklace: NecklaceArgs,
        #[arg(long)]
        matrix: Option<String>,
    },
    Roundtrip {
        #[command(flatten)]
        necklace: NecklaceArgs,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    Diagram {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AnalysisCmd {
    Sep { pi: String },
    ToggleGraph {
        pi: String,
        #[arg(long)]
        dot: bool,
        /// Include ideal elements outside Sep.
        #[arg(long)]
        all: bool,
    },
    Connected { pi: String },
    Schubert { pi: String },
    Sweep {
        kind: String,
        #[arg(long)]
        n_max: usize,
    },
}
