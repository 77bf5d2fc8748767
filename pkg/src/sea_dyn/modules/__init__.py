"""
Domain modules for sea-dyn
Each sub-package owns one layer of the solver, from the matrix kernel up to the scenario runner
"""
