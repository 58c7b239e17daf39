# -*- coding: utf-8 -*-

import json
import pathlib
import sys

# In order to import spline_QI we need to add the working dir to the system path
working_path = str(pathlib.Path().resolve())
sys.path.append(working_path)

from spline_QI.harness import HarnessConfig, run_experiment
from spline_QI.utils import setup_logging

# Polynomial reproduction of every operator on every partition family

if __name__ == "__main__":
    setup_logging(1)

    ##########################################################################
    # Setup sweep ############################################################
    ##########################################################################

    operators = ["q2", "q2star", "qpstar", "qpq", "g1", "g2", "g2:clamped",
                 "gpstar", "gpq", "q3"]
    degrees = [2, 3, 4, 5, 6]
    partitions = ["uniform:24", "arithmetic:24:d=0.25",
                  "geometric:24:rho=1.1", "jump:24:h3=100",
                  "random:50:n=30:r=2:seed=0"]

    config = HarnessConfig(experiment="exactness", operators=operators,
                           degrees=degrees, partitions=partitions)

    ##########################################################################
    # Run and save ###########################################################
    ##########################################################################

    report = run_experiment(config)
    results_folder = report.save(report.results_folder())
    print(json.dumps(report.summary(), indent=2, default=str))
