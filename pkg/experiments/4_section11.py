# -*- coding: utf-8 -*-

import json
import os
import pathlib
import sys

import matplotlib.pyplot as plt
import numpy as np
import seaborn as sb

sb.set_style('whitegrid')
plot_params = {
    'font.family': 'serif',
    'font.size': 16,
}
plt.rcParams.update(plot_params)

# In order to import spline_QI we need to add the working dir to the system path
working_path = str(pathlib.Path().resolve())
sys.path.append(working_path)

from spline_QI.dqi import build_Q3_cubic
from spline_QI.harness import HarnessConfig, run_experiment
from spline_QI.norms import lebesgue_sample, section11_partition
from spline_QI.utils import generate_grid, setup_logging

# Growth of the Lebesgue function of the cubic Q3 when one knot interval is
# stretched by h while its neighbours keep unit length

if __name__ == "__main__":
    setup_logging(1)
    verbose = False

    config = HarnessConfig(experiment="section11",
                           h_values=[1., 10., 100., 1e3, 1e4])
    report = run_experiment(config)
    results_folder = report.save(report.results_folder())
    print(json.dumps(report.summary(), indent=2, default=str))

    ##########################################################################
    # Lebesgue profiles ######################################################
    ##########################################################################

    for h in (1., 10., 100.):
        window = section11_partition(h)
        qi = build_Q3_cubic(window)
        lo, hi = qi.valid_interval()
        knots = window.knots
        x = generate_grid(knots[(knots >= lo) & (knots <= hi)], 128)
        profile = lebesgue_sample(qi, x=x)
        name = f'lebesgue_h{h:g}'
        profile.to_csv(os.path.join(results_folder, name + '.csv'))

        # Abscissas rescaled so that the stretched interval is [0, 1]
        u = (x - window.t(2)) / (window.t(3) - window.t(2))
        plt.plot(u, profile.values, label=rf'$h = {h:g}$')
        plt.yscale('log')
    plt.axvline(0.5, color='k', linestyle='--', linewidth=0.8)
    plt.xlabel(r'$(x - t_2) / h$')
    plt.ylabel(r'$\Lambda(x)$')
    plt.legend()
    plt.savefig(os.path.join(results_folder, 'lebesgue_profiles.pdf'),
                bbox_inches="tight")
    if verbose:
        plt.show()
    plt.clf()
    plt.close('all')

    # Lambda(s) against h
    frame = report.to_frame()
    lambdas = frame[frame["quantity"] == "lambda_s"]
    h_values = np.array(config.h_values)
    plt.loglog(h_values, lambdas["measured"].values, 'x-',
               label=r'$\Lambda(s)$')
    plt.loglog(h_values, h_values / 2., '--', label=r'$h / 2$')
    plt.xlabel(r'$h$')
    plt.legend()
    plt.savefig(os.path.join(results_folder, 'lambda_s.pdf'),
                bbox_inches="tight")
    if verbose:
        plt.show()
    plt.clf()
    plt.close('all')
