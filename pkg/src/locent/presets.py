"""Named run configurations reproducing the standard benchmark figures.

Graph and region labels are 1-based, as on the command line.
"""

CHAIN4 = {"n": 4, "edges": [[1, 2], [2, 3], [3, 4]]}
Q_GRID = "0:1:21"

PRESETS = {
    "fig3a": {
        "command": "bounds",
        "graph": CHAIN4,
        "noise": {"default": {"kind": "BF"}},
        "region": [1, 3],
        "q_grid": Q_GRID,
    },
    "fig3b": {
        "command": "bounds",
        "graph": CHAIN4,
        "noise": {"default": {"kind": "BF"}},
        "region": [1, 2, 3],
        "part": [1],
        "q_grid": Q_GRID,
    },
    "fig3c": {
        "command": "bounds",
        "graph": CHAIN4,
        "noise": {"default": {"kind": "AD"}},
        "region": [1, 3],
        "q_grid": Q_GRID,
    },
    "fig4c": {
        "command": "qc",
        "n_range": "1:20",
        "pairs": ["00", "01", "11", "13"],
    },
    "fig6": {
        "command": "linear",
        "nl_range": "3:10",
        "kind": "PF",
        "q_grid": Q_GRID,
    },
}
