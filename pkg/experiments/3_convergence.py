# -*- coding: utf-8 -*-

import json
import pathlib
import sys

# In order to import spline_QI we need to add the working dir to the system path
working_path = str(pathlib.Path().resolve())
sys.path.append(working_path)

from spline_QI.harness import HarnessConfig, run_experiment
from spline_QI.utils import setup_logging

# Empirical order of convergence under dyadic refinement

if __name__ == "__main__":
    setup_logging(1)

    config = HarnessConfig.from_json("experiments/configs/convergence.json")

    ##########################################################################
    # Run and save ###########################################################
    ##########################################################################

    report = run_experiment(config)
    results_folder = report.save(report.results_folder())
    print(json.dumps(report.summary(), indent=2, default=str))

    frame = report.to_frame()
    eoc = frame[frame["quantity"] == "eoc"]
    print(eoc.pivot_table(index=["operator", "m", "partition"],
                          columns="index", values="measured"))
