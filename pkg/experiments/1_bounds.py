# -*- coding: utf-8 -*-

import json
import pathlib
import sys

# In order to import spline_QI we need to add the working dir to the system path
working_path = str(pathlib.Path().resolve())
sys.path.append(working_path)

from spline_QI.harness import HarnessConfig, run_experiment
from spline_QI.utils import setup_logging

# Norm bounds on random partitions, one seed per call (see launch_script.sh)

if __name__ == "__main__":
    setup_logging(1)
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0

    ##########################################################################
    # Setup sweep ############################################################
    ##########################################################################

    operators = ["g1", "q2star", "qpstar", "g2", "gpstar", "q3"]
    degrees = [2, 3, 4, 5, 6]
    partitions = [f"random:200:n=40:r=2:seed={1000 * seed}",
                  f"random:20:n=40:r=5:seed={1000 * seed + 500}",
                  "geometric:24:rho=1.5", "geometric:24:rho=2",
                  "geometric:24:rho=4", "jump:30:h3=1000"]

    config = HarnessConfig(experiment="bounds", operators=operators,
                           degrees=degrees, partitions=partitions,
                           grid={"points_per_interval": 32}, seed=seed)

    ##########################################################################
    # Run and save ###########################################################
    ##########################################################################

    report = run_experiment(config)
    results_folder = report.save(report.results_folder())
    summary = report.summary()
    print(json.dumps(summary, indent=2, default=str))
    if summary["fail_count"]:
        frame = report.to_frame()
        print(frame[~frame["passed"]].to_string())
