##
# File:    testMonthlySeriesAnalysis.py
# Author:  J. Westbrook
# Date:    6-Feb-2026
#
# Updates:
#  10-Feb-2026 jdw yield curve and term summary cases
##
"""
Tests for monthly series fitting and the partition, bin level and interest rate summaries.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import os
import time
import unittest

from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.LayeredMultigraph import LoanRecord
from rcsb.utils.layersbm.LayeredSbmInference import FitConfig
from rcsb.utils.layersbm.LayeredSbmInference import LayeredSbmInference
from rcsb.utils.layersbm.MonthlySeriesAnalysis import MonthlyFit
from rcsb.utils.layersbm.MonthlySeriesAnalysis import MonthlySeriesAnalysis
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class MonthlySeriesAnalysisTests(unittest.TestCase):
    def setUp(self):
        self.__config = FitConfig(seed=13, nSweeps=20, nLevelSweeps=3, nAnneal=1, samples=20)
        self.__msa = MonthlySeriesAnalysis(self.__config)
        self.__png = PlantedNetworkGenerator()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __plantedGraph(self, seed, numLayers=2):
        spec = PlantedSpec([12, 12], [[[30.0, 3.0], [3.0, 30.0]]], [0] * numLayers, [(1.0, 1.0)])
        graph, truth, _ = self.__png.sample(spec, seed)
        return graph, truth

    def testNmi(self):
        pA = Partition([0, 0, 1, 1, 2])
        self.assertAlmostEqual(self.__msa.nmi(pA, Partition(["x", "x", "y", "y", "z"])), 1.0, places=12)
        self.assertEqual(self.__msa.nmi(Partition.trivial(4), Partition.trivial(4)), 1.0)
        self.assertEqual(self.__msa.nmi(Partition.trivial(5), pA), 0.0)
        score = self.__msa.nmi(pA, Partition([0, 1, 0, 1, 0]))
        self.assertGreaterEqual(score, 0.0)
        self.assertLess(score, 1.0)
        self.assertAlmostEqual(score, self.__msa.nmi(Partition([0, 1, 0, 1, 0]), pA), places=12)
        with self.assertRaises(ValueError):
            self.__msa.nmi(pA, Partition([0, 1]))

    def testStrengthFilter(self):
        graph = LayeredMultigraph(["a", "b", "c", "d"], [[(0, 1, 6.0), (2, 3, 1.0)], [(0, 2, 2.0)]], ["<1d", "2-7d"])
        # total strengths a 8, b 6, c 3, d 1 over a doubled volume of 18
        self.assertEqual(self.__msa.strengthFilter(graph, 0.4), {"a"})
        self.assertEqual(self.__msa.strengthFilter(graph, 0.75), {"a", "b"})
        self.assertEqual(self.__msa.strengthFilter(graph, 1.0), {"a", "b", "c", "d"})
        for seed in range(3):
            graph, _ = self.__plantedGraph(seed)
            prevS = set()
            for q in (0.5, 0.8, 0.95, 0.99, 1.0):
                keepS = self.__msa.strengthFilter(graph, q)
                self.assertTrue(prevS.issubset(keepS))
                prevS = keepS
            self.assertEqual(len(prevS), graph.getNodeCount())
        for q in (0.0, 1.5):
            with self.assertRaises(ValueError):
                self.__msa.strengthFilter(graph, q)

    def testBinSummaries(self):
        graph, truth = self.__plantedGraph(4, numLayers=4)
        for bins in (BinSet.singletons(4), BinSet([[0, 1], [2, 3]]), BinSet.aggregate(4)):
            sizeL = self.__msa.ogbSizes(graph, bins)
            self.assertEqual(len(sizeL), bins.getBinCount())
            self.assertAlmostEqual(sum(sizeL), graph.layerSize(), places=6)
            rowL = self.__msa.groupStrengths(graph, truth, bins)
            self.assertEqual(len(rowL), bins.getBinCount() * truth.getGroupCount())
            for binIdx, binL in enumerate(bins.getBins()):
                binRowL = [rD for rD in rowL if rD["bin"] == binIdx]
                self.assertAlmostEqual(sum(rD["s_out"] for rD in binRowL), sum(rD["s_in"] for rD in binRowL), places=6)
                self.assertAlmostEqual(sum(rD["s_out"] + rD["s_internal"] for rD in binRowL), graph.layerSize(binL), places=6)
        #
        tableD = self.__msa.instrengthRatioTable(graph, BinSet([[0, 1], [2, 3]]), 1.0)
        self.assertEqual(sorted(tableD), [0, 1])
        for rowL in tableD.values():
            self.assertTrue(all(0.0 <= ratio <= 1.0 for _, _, ratio in rowL))
            self.assertEqual([tT[1] for tT in rowL], sorted((tT[1] for tT in rowL), reverse=True))
        self.assertLessEqual(len(self.__msa.instrengthRatioTable(graph, BinSet.aggregate(4), 0.1)[0]), len(tableD[0]) + len(tableD[1]))
        with self.assertRaises(ValueError):
            self.__msa.instrengthRatioTable(graph, BinSet.aggregate(4), 0.0)

    def testYieldSummary(self):
        recL = [
            LoanRecord("a", "b", 1, 1.0, "<1d", 2.0),
            LoanRecord("a", "c", 1, 1.0, "<1d", 3.0),
            LoanRecord("b", "c", 1, 1.0, "<1d", 4.0),
            LoanRecord("c", "a", 1, 1.0, "1-3y", 7.0),
            LoanRecord("c", "b", 1, 1.0, ">3y", 7.0),
            LoanRecord("a", "b", 1, 5.0, "8-30d", None),
        ]
        ys = self.__msa.yieldSummary(recL)
        self.assertEqual(ys.spread, 4.0)
        self.assertEqual(ys.medians["<1d"], 3.0)
        self.assertEqual(ys.counts, {"<1d": 3, "1-3y": 1, ">3y": 1})
        #
        weighted = self.__msa.yieldSummary([LoanRecord("a", "b", 2, 1.0, "2-7d", 10.0), LoanRecord("b", "a", 2, 3.0, "2-7d", 20.0)])
        self.assertAlmostEqual(weighted.weightedMeans["2-7d"], 17.5, places=12)
        self.assertEqual(weighted.medians["2-7d"], 15.0)
        self.assertIsNone(weighted.spread)
        with self.assertRaises(ValueError):
            self.__msa.yieldSummary([LoanRecord("a", "b", 1, 1.0, "<1d", None)])
        #
        curveD = self.__msa.monthlyYieldCurves(recL + [LoanRecord("a", "b", 2, 1.0, "2-7d", 10.0), LoanRecord("a", "b", 3, 1.0, "<1d", None)])
        self.assertEqual(sorted(curveD), [1, 2])
        #
        termL = self.__msa.termSummary(recL)
        self.assertEqual([rD["maturity"] for rD in termL], ["<1d", "8-30d", "1-3y", ">3y"])
        self.assertEqual(termL[0]["loans"], 3)
        self.assertAlmostEqual(termL[0]["mean_interest"], 0.03, places=12)
        self.assertIsNone(termL[1]["mean_interest"])
        self.assertEqual(termL[1]["mean_volume"], 5.0)

    def testConsecutiveNmi(self):
        graph, truth = self.__plantedGraph(7)
        fit = LayeredSbmInference(self.__config).fitBins(graph, BinSet.singletons(2))
        series = [MonthlyFit(month, fit, graph.getNodeCount(), fit.partition.getGroupCount(), -5.0, -3.0, graph) for month in (1, 2, 3, 5)]
        for q in (0.95, 1.0):
            rowL = self.__msa.consecutiveNmi(series, q)
            self.assertEqual([month for month, _ in rowL], [2, 3])
            self.assertTrue(all(abs(val - 1.0) < 1.0e-12 for _, val in rowL))
        self.assertEqual(self.__msa.banksPerGroup(series)[0], (1, graph.getNodeCount() / float(fit.partition.getGroupCount())))
        #
        reportD = self.__msa.seriesReport(series, qList=[0.95, 1.0])
        self.assertEqual(reportD["months"], [1, 2, 3, 5])
        self.assertEqual(sorted(reportD["nmi"]), ["0.95", "1.0"])
        self.assertEqual(reportD["og_timeline"][0]["label"], "2000-01")
        self.assertEqual(reportD["og_timeline"][0]["bin_labels"], ["<1d", "2-7d"])
        self.assertAlmostEqual(sum(reportD["ogb_sizes"][0]["sizes"]), reportD["ogb_sizes"][0]["network_size"], places=6)

    def testRunSeries(self):
        graphD = {month: self.__plantedGraph(100 + month)[0] for month in (1, 2, 4)}
        series = self.__msa.runSeries(graphD)
        self.assertEqual([mf.month for mf in series], [1, 2, 4])
        self.assertEqual(self.__msa.getFailedMonths(), [])
        for mf in series:
            self.assertEqual(mf.activeBanks, graphD[mf.month].getNodeCount())
            self.assertEqual(mf.bCount, mf.fit.partition.getGroupCount())
            self.assertLessEqual(mf.log10VsDifferentiation, 0.0)
            self.assertLessEqual(mf.log10VsAggregation, 0.0)
            self.assertEqual(mf.fit.graphHash, LayeredSbmInference.graphHash(graphD[mf.month]))
        again = MonthlySeriesAnalysis(self.__config.copy(numProc=2)).runSeries(graphD)
        self.assertEqual([mf.fit.toDict() for mf in again], [mf.fit.toDict() for mf in series])
        self.assertEqual([month for month, _ in self.__msa.consecutiveNmi(series, 1.0)], [2])
        with self.assertRaises(ValueError):
            self.__msa.runSeries({})


def monthlySeriesSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testNmi"))
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testStrengthFilter"))
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testBinSummaries"))
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testYieldSummary"))
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testConsecutiveNmi"))
    suiteSelect.addTest(MonthlySeriesAnalysisTests("testRunSeries"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = monthlySeriesSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
