##
# File:    testNetworkStatsUtil.py
# Author:  J. Westbrook
# Date:    20-Jan-2026
#
# Updates:
#  28-Jan-2026 jdw Erdos-Renyi self-null z-score checks
##
"""
Tests for per-layer network statistics.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import os
import time
import unittest

import networkx as nx
import numpy as np

from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.NetworkStatsUtil import NetworkStatsUtil

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class NetworkStatsUtilTests(unittest.TestCase):
    def setUp(self):
        self.__nsU = NetworkStatsUtil()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __graph(self, numNodes, edgeL, numLayers=1):
        layers = [[(ii, jj, 1.0) for ii, jj in edgeL]] + [[] for _ in range(numLayers - 1)]
        return LayeredMultigraph(["b%02d" % ii for ii in range(numNodes)], layers, ["L%d" % ll for ll in range(numLayers)], requireActive=False)

    def testDensityAndDegrees(self):
        graph = self.__graph(3, [(0, 1), (1, 0), (0, 1), (2, 0)])
        self.assertAlmostEqual(self.__nsU.directedDensity(graph), 0.5, places=12)
        ds = self.__nsU.degreeSummary(graph)
        self.assertEqual(ds.outDegrees, [2, 1, 1])
        self.assertEqual(ds.inDegrees, [2, 2, 0])
        self.assertEqual(ds.totalDegrees, [4, 3, 1])
        self.assertEqual(NetworkStatsUtil.ccdf([1, 1, 2]), {0: 1.0, 1: 1.0, 2: 1.0 / 3.0})
        self.assertEqual(self.__nsU.jointDegreeTable(graph), [(2, 2), (2, 1), (0, 1)])
        with self.assertRaises(ValueError):
            self.__nsU.directedDensity(self.__graph(3, [(1, 1)]))

    def testClusteringAndPaths(self):
        triangle = self.__graph(3, [(0, 1), (1, 2), (2, 0)])
        cr = self.__nsU.clusteringWithNull(triangle, nNull=5)
        self.assertEqual(cr.cObserved, 1.0)
        self.assertEqual(cr.cNullMean, 1.0)
        self.assertIsNone(cr.z)
        star = self.__graph(5, [(0, 1), (0, 2), (3, 0), (4, 0)])
        self.assertEqual(self.__nsU.clusteringWithNull(star, nNull=5).cObserved, 0.0)
        self.assertAlmostEqual(self.__nsU.degreeAssortativity(star), -1.0, places=9)
        #
        path = self.__graph(3, [(0, 1), (2, 1)])
        dd, lccSize = self.__nsU.avgShortestPathLcc(path)
        self.assertAlmostEqual(dd, 4.0 / 3.0, places=12)
        self.assertEqual(lccSize, 3)
        pr = self.__nsU.shortestPathWithNull(path, nNull=3)
        self.assertEqual(pr.nNull, 3)
        self.assertAlmostEqual(pr.dNullMean, 4.0 / 3.0, places=12)
        with self.assertRaises(ValueError):
            self.__nsU.clusteringWithNull(self.__graph(2, [(0, 1)]))
        with self.assertRaises(ValueError):
            self.__nsU.avgShortestPathLcc(self.__graph(2, [(0, 0)]))

    def testComponents(self):
        dag = self.__graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        cr = self.__nsU.componentStats(dag)
        self.assertEqual((cr.nWeak, cr.nStrong), (2, 5))
        self.assertAlmostEqual(cr.lccWeakFrac, 0.6, places=12)
        cycle = self.__graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        cr = self.__nsU.componentStats(cycle)
        self.assertEqual((cr.nWeak, cr.nStrong), (1, 2))
        self.assertAlmostEqual(cr.lccStrongFrac, 0.75, places=12)

    def testKendallW(self):
        rankA = {"a": 1, "b": 2, "c": 3, "d": 4}
        ww, pVal = self.__nsU.kendallW(rankA, dict(rankA), dict(rankA))
        self.assertAlmostEqual(ww, 1.0, places=12)
        self.assertLess(pVal, 0.1)
        ww, _ = self.__nsU.kendallW(rankA, {key: -val for key, val in rankA.items()})
        self.assertAlmostEqual(ww, 0.0, places=12)
        tied = {"a": 1, "b": 1, "c": 2, "d": 3}
        ww, _ = self.__nsU.kendallW(tied, dict(tied))
        self.assertAlmostEqual(ww, 1.0, places=12)
        with self.assertRaises(ValueError):
            self.__nsU.kendallW(rankA)
        with self.assertRaises(ValueError):
            self.__nsU.kendallW(rankA, {"a": 1, "b": 2, "c": 3, "e": 4})
        with self.assertRaises(ValueError):
            self.__nsU.kendallW({"a": 1, "b": 1, "c": 1}, {"a": 2, "b": 2, "c": 2})

    def testStretchedExponentialFit(self):
        rng = np.random.default_rng(2026)
        samples = 300.0 * rng.weibull(0.5, size=100000)
        fit = self.__nsU.fitStretchedExponential(samples)
        logger.info("Fitted lambda %.6g (+/- %.2g) beta %.4f (+/- %.2g)", fit.lam, fit.stderrLambda, fit.beta, fit.stderrBeta)
        self.assertAlmostEqual(fit.beta, 0.5, delta=0.01)
        self.assertAlmostEqual(1.0 / fit.lam, 300.0, delta=15.0)
        self.assertTrue(fit.fatTail)
        self.assertGreater(fit.stderrBeta, 0.0)
        self.assertLess(fit.stderrBeta, 0.01)
        self.assertEqual(fit.numSamples, 100000)
        with self.assertRaises(ValueError):
            self.__nsU.fitStretchedExponential([1, 2, 3])
        with self.assertRaises(ValueError):
            self.__nsU.fitStretchedExponential([4] * 60)

    def testErdosRenyiSelfNull(self):
        """Clustering of G(N, E) graphs scored against their own null ensemble stays within 3 standard deviations."""
        withinCount = 0
        numTrials = 30
        for seed in range(numTrials):
            ng = nx.gnm_random_graph(60, 180, seed=1000 + seed)
            graph = self.__graph(60, list(ng.edges()))
            cr = self.__nsU.clusteringWithNull(graph, nNull=50, seed=seed)
            withinCount += cr.z is not None and abs(cr.z) <= 3.0
        logger.info("%d of %d self-null z-scores within 3", withinCount, numTrials)
        self.assertGreaterEqual(withinCount, 27)

    def testActivity(self):
        graph = LayeredMultigraph(["a", "b", "c"], [[(0, 1, 1.0)], [(0, 2, 2.0)], []], ["<1d", "2-7d", "8-30d"])
        ar = self.__nsU.totalActivity(graph)
        self.assertEqual(ar.activity, {"a": 2, "b": 1, "c": 1})
        self.assertEqual(ar.distribution, {0: 0, 1: 2, 2: 1, 3: 0})
        self.assertAlmostEqual(ar.mean, 4.0 / 3.0, places=12)
        #
        other = LayeredMultigraph(["a", "b"], [[(0, 1, 3.0), (1, 0, 1.0)], [], []], ["<1d", "2-7d", "8-30d"])
        rowL = self.__nsU.activityTable({1: graph, 2: other, 13: other})
        self.assertEqual([(rD["year"], rD["layer"]) for rD in rowL][:3], [(2000, "<1d"), (2000, "2-7d"), (2000, "8-30d")])
        first = rowL[0]
        self.assertEqual(first["months"], 2)
        self.assertEqual(first["loans"], 3)
        self.assertEqual(first["volume"], 5.0)
        self.assertAlmostEqual(first["mean_active_banks"], 2.0, places=12)
        self.assertAlmostEqual(first["loans_per_active_bank"], 0.75, places=12)
        self.assertEqual(rowL[-1]["year"], 2001)

    def testLayerReport(self):
        small = LayeredMultigraph(["a", "b"], [[(0, 1, 4.0)]], ["<1d"])
        rD = self.__nsU.layerReport(small, layer=0, nNull=3)
        self.assertEqual(rD["layer"], "<1d")
        self.assertEqual(rD["density"], 0.5)
        self.assertEqual(sorted(rD["errors"]), ["assortativity", "clustering", "fit_in_degree", "fit_out_degree", "kendall_w_in_out"])
        self.assertIsNone(rD["clustering"])
        self.assertEqual(rD["path_length"]["d"], 1.0)
        self.assertEqual(rD["components"]["nWeak"], 1)
        #
        ng = nx.gnm_random_graph(80, 400, seed=5, directed=True)
        graph = self.__graph(80, list(ng.edges()), numLayers=2)
        rD = self.__nsU.layerReport(graph, layer=None, nNull=5, seed=1)
        self.assertEqual(rD["layer"], "L0+L1")
        self.assertEqual(rD["loans"], 400)
        self.assertNotIn("clustering", rD["errors"])
        self.assertEqual(NetworkStatsUtil(numProc=2).layerReport(graph, layer=[0], nNull=5, seed=1)["clustering"], rD["clustering"])


def networkStatsSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(NetworkStatsUtilTests("testDensityAndDegrees"))
    suiteSelect.addTest(NetworkStatsUtilTests("testClusteringAndPaths"))
    suiteSelect.addTest(NetworkStatsUtilTests("testComponents"))
    suiteSelect.addTest(NetworkStatsUtilTests("testKendallW"))
    suiteSelect.addTest(NetworkStatsUtilTests("testStretchedExponentialFit"))
    suiteSelect.addTest(NetworkStatsUtilTests("testErdosRenyiSelfNull"))
    suiteSelect.addTest(NetworkStatsUtilTests("testActivity"))
    suiteSelect.addTest(NetworkStatsUtilTests("testLayerReport"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = networkStatsSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
