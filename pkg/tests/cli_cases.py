"""Golden CLI invocations: name -> argv.  Regenerate with scripts/regen_golden.py."""

CASES = {
    "ft_dims_chain2": ["ft-dims", "--lattice", "chain2", "--bound", "3"],
    "tensor_dims_chain1": ["tensor-dims", "--lattice", "chain1", "--lattice", "chain1"],
    "lattice_check_n5": ["lattice", "check", "n5"],
    "lattice_check_m3": ["lattice-check", "m3"],
    "reconstruct_diamond": ["reconstruct", "--algebra", "ft:diamond", "--bound", "3"],
    "reconstruct_n5": ["reconstruct", "--algebra", "ft:n5", "--bound", "2"],
    "verify_tau_chain1": ["verify", "tau", "--lattice", "chain1", "--lattice", "chain1", "--bound", "3"],
    "verify_tau_json": ["--json", "verify", "tau", "--lattice", "chain1", "--lattice", "chain2", "--bound", "2"],
    "hom_dims_rep1_ft": ["hom-dims", "rep:1", "ft:chain2"],
    "verify_all_bound2": ["verify", "all", "--bound", "2"],
}
