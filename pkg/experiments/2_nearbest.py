# -*- coding: utf-8 -*-

import json
import pathlib
import sys

# In order to import spline_QI we need to add the working dir to the system path
working_path = str(pathlib.Path().resolve())
sys.path.append(working_path)

from spline_QI.harness import HarnessConfig, run_experiment
from spline_QI.utils import setup_logging

# l1-minimality of the three-point Qp* and Gp* stencils, and the knot
# conditions certifying it

if __name__ == "__main__":
    setup_logging(1)

    config = HarnessConfig(
        experiment="nearbest", operators=["qpstar", "gpstar"],
        degrees=[2, 3, 4], partitions=["uniform:30",
                                       "random:5:n=30:r=1.2:seed=0",
                                       "random:50:n=30:r=1.1:seed=100",
                                       "random:5:n=30:r=3:seed=10"])

    ##########################################################################
    # Run and save ###########################################################
    ##########################################################################

    report = run_experiment(config)
    results_folder = report.save(report.results_folder())
    print(json.dumps(report.summary(), indent=2, default=str))

    # Share of stencils where the knot condition holds, per family and degree
    frame = report.to_frame()
    condition = frame[frame["quantity"] == "condition"]
    print(condition.groupby(["operator", "m", "p"])["measured"].mean())
