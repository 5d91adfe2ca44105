use snapmesh::MethodRegistry;

fn main() {
    let registry = MethodRegistry::with_builtins();
    let code = snapmesh_cli::run(
        std::env::args_os(),
        &registry,
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
