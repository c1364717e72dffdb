##
# File:    testPlantedNetworkGenerator.py
# Author:  J. Westbrook
# Date:    12-Jan-2026
#
# Updates:
#   2-Feb-2026 jdw ready-made benchmark specs and rate emission
#  12-Feb-2026 jdw per-class propensities
##
"""
Tests for planted layered network sampling and loan record emission.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import os
import time
import unittest

import numpy as np

from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class PlantedNetworkGeneratorTests(unittest.TestCase):
    def setUp(self):
        self.__png = PlantedNetworkGenerator()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def testDeterminism(self):
        spec = self.__png.granularitySpec()
        gA, pA, bA = self.__png.sample(spec, 42)
        gB, pB, bB = self.__png.sample(spec, 42)
        self.assertTrue(gA.isEquivalent(gB))
        for layer in range(gA.getLayerCount()):
            self.assertEqual(gA.getEdges(layer), gB.getEdges(layer))
        self.assertEqual(pA, pB)
        self.assertEqual(bA, bB)
        gC, _, _ = self.__png.sample(spec, 43)
        self.assertFalse(gA.isEquivalent(gC))
        #
        seriesD = self.__png.sampleSeries(spec, [3, 1], 42)
        self.assertEqual(sorted(seriesD), [1, 3])
        self.assertTrue(seriesD[1].isEquivalent(self.__png.sample(spec, [42, 1])[0]))
        self.assertFalse(seriesD[1].isEquivalent(seriesD[3]))

    def testEdgeCounts(self):
        """Per layer and group pair edge counts follow the Poisson rates."""
        spec = PlantedSpec([10, 10], [[[50.0, 5.0], [0.0, 20.0]]], [0, 0], [(0.0, 0.5)])
        countM = np.zeros((200, 2, 2))
        for seed in range(200):
            graph, truth, _ = self.__png.sample(spec, seed)
            groupOf = truth.getAssignmentArray()
            for layer in range(2):
                src, dst, wt = graph.getEdgeArrays(layer)
                self.assertTrue(np.all(wt > 0))
                np.add.at(countM[seed], (groupOf[src], groupOf[dst]), 0.5)
        meanM = countM.mean(axis=0)
        logger.info("Mean per-layer block counts %r", meanM.tolist())
        self.assertAlmostEqual(meanM[0, 0], 50.0, delta=1.5)
        self.assertAlmostEqual(meanM[0, 1], 5.0, delta=0.5)
        self.assertEqual(meanM[1, 0], 0.0)
        self.assertAlmostEqual(meanM[1, 1], 20.0, delta=1.0)

    def testCorePeripheryBenchmark(self):
        spec = self.__png.corePeripherySpec()
        self.assertEqual(spec.getTruthBins(), BinSet([[0, 1], [2]]))
        self.assertEqual(spec.propensities.shape, (3, 50))
        self.assertTrue(np.array_equal(spec.propensities[0], spec.propensities[1]))
        self.assertFalse(np.array_equal(spec.propensities[0], spec.propensities[2]))
        for seed in range(3):
            graph, truth, _ = self.__png.sample(spec, seed)
            self.assertEqual(graph.getLayerLabels(), ["A", "B", "C"])
            groupOf = truth.getAssignmentArray()
            coreGroup = groupOf[0]
            src, dst, _ = graph.getEdgeArrays(0)
            # perfect core-periphery: every edge touches the core
            self.assertTrue(np.all((groupOf[src] == coreGroup) | (groupOf[dst] == coreGroup)))
            src, dst, _ = graph.getEdgeArrays(2)
            # community layer: the core is silent
            self.assertFalse(np.any((groupOf[src] == coreGroup) | (groupOf[dst] == coreGroup)))
            self.assertTrue(self.__png.corePeripheryBenchmark(seed).isEquivalent(graph))

    def testSpecs(self):
        for name in ("core_periphery", "granularity", "two_block", "single_pattern", "multi_pattern"):
            spec = self.__png.getSpecBuilder(name)()
            self.assertTrue(spec.validate())
            copySpec = PlantedSpec.fromDict(spec.toDict())
            self.assertEqual(copySpec.toDict(), spec.toDict())
            self.assertEqual(copySpec.getTruthBins(), spec.getTruthBins())
        with self.assertRaises(ValueError):
            self.__png.getSpecBuilder("fractal")
        ncSpec = PlantedSpec([5, 5], [[[5.0, 1.0], [1.0, 5.0]], [[1.0, 5.0], [5.0, 1.0]]], [0, 1, 0], [(0.0, 1.0), (1.0, 1.0)])
        self.assertEqual(ncSpec.getTruthBins().getKind(), BinSet.NONCONTIGUOUS)
        self.assertEqual(ncSpec.getTruthBins().getBins(), [[0, 2], [1]])

    def testInvalidSpecs(self):
        rates = [[5.0, 1.0], [1.0, 5.0]]
        badL = [
            lambda: PlantedSpec([5, 0], [rates], [0], [(0.0, 1.0)]),
            lambda: PlantedSpec([5, -1], [rates], [0], [(0.0, 1.0)]),
            lambda: PlantedSpec([5, 5], [[[5.0, 1.0]]], [0], [(0.0, 1.0)]),
            lambda: PlantedSpec([5, 5], [rates], [1], [(0.0, 1.0)]),
            lambda: PlantedSpec([5, 5], [rates], [0], [(0.0, 0.0)]),
            lambda: PlantedSpec([5, 5], [[[5.0, -1.0], [1.0, 5.0]]], [0], [(0.0, 1.0)]),
            lambda: PlantedSpec([5, 5], [rates], [0], [(0.0, 1.0)], propensities=[1.0] * 9),
            lambda: PlantedSpec([5, 5], [rates], [0], [(0.0, 1.0)], propensities=[[1.0] * 10, [1.0] * 10]),
            lambda: PlantedSpec([5, 5], [rates], [0, 0], [(0.0, 1.0)], layerLabels=["x"]),
            lambda: PlantedSpec([5, 5], [rates], [0, 0], [(0.0, 1.0)], truthBins=[[0]]),
        ]
        for func in badL:
            with self.assertRaises(ValueError):
                func()
        with self.assertRaisesRegex(ValueError, "infeasible"):
            PlantedSpec([5, 0], [rates], [0], [(0.0, 1.0)])
        # a zero-size group with zero rates is feasible
        spec = PlantedSpec([5, 0], [[[5.0, 0.0], [0.0, 0.0]]], [0], [(0.0, 1.0)])
        graph, truth, _ = self.__png.sample(spec, 1)
        self.assertEqual(truth.getGroupCount(), 1)
        self.assertLessEqual(graph.getNodeCount(), 5)

    def testEmptyGraph(self):
        spec = PlantedSpec([4, 4], [[[0.0, 0.0], [0.0, 0.0]]], [0, 0], [(0.0, 1.0)])
        graph, truth, _ = self.__png.sample(spec, 3)
        self.assertEqual(graph.getNodeCount(), 0)
        self.assertEqual(graph.getEdgeCount(), 0)
        self.assertEqual(truth.getNodeCount(), 0)
        self.assertEqual(self.__png.emitLoanRecords(graph, 1), [])

    def testEmitLoanRecords(self):
        graph, _, _ = self.__png.sample(self.__png.twoBlockSpec(numNodes=20, withinRate=20.0, betweenRate=2.0, numLayers=3), 5)
        recL = self.__png.emitLoanRecords(graph, 7)
        self.assertEqual(len(recL), graph.getEdgeCount())
        self.assertTrue(all(rec.month == 7 and rec.rate is None for rec in recL))
        self.assertEqual({rec.maturity for rec in recL}, {MaturityClass.LT_1D, MaturityClass.D_2_7, MaturityClass.D_8_30})
        ratedL = self.__png.emitLoanRecords(graph, 7, rateSeed=11)
        self.assertEqual([rec.rate for rec in ratedL], [rec.rate for rec in self.__png.emitLoanRecords(graph, 7, rateSeed=11)])
        self.assertTrue(all(rec.rate is not None and rec.rate >= 0.0 for rec in ratedL))
        meanD = {}
        for rec in ratedL:
            meanD.setdefault(rec.maturity.ordinal, []).append(rec.rate)
        self.assertLess(np.mean(meanD[0]), np.mean(meanD[2]))
        #
        with self.assertRaises(ValueError):
            self.__png.emitLoanRecords(self.__png.corePeripheryBenchmark(1), 1)


def plantedNetworkSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testDeterminism"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testEdgeCounts"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testCorePeripheryBenchmark"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testSpecs"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testInvalidSpecs"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testEmptyGraph"))
    suiteSelect.addTest(PlantedNetworkGeneratorTests("testEmitLoanRecords"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = plantedNetworkSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
