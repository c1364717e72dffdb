##
# File:    testLayeredMultigraph.py
# Author:  J. Westbrook
# Date:    13-Jan-2026
#
# Updates:
#  24-Jan-2026 jdw add non-contiguous bin set cases
##
"""
Tests for maturity classes, bin sets and layered multigraph layer algebra.
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
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.LayeredMultigraph import monthToLabel
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class LayeredMultigraphTests(unittest.TestCase):
    def setUp(self):
        self.__png = PlantedNetworkGenerator()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __randomGraph(self, seed, numLayers=3):
        rates = [[30.0, 10.0], [10.0, 30.0]]
        spec = PlantedSpec([15, 15], [rates], [0] * numLayers, [(0.0, 1.0)])
        graph, _, _ = self.__png.sample(spec, seed)
        return graph

    def testMaturityClass(self):
        codeL = MaturityClass.codes()
        self.assertEqual(len(codeL), 8)
        self.assertEqual(codeL[0], "<1d")
        self.assertEqual(codeL[-1], ">3y")
        for ordinal, code in enumerate(codeL):
            self.assertEqual(MaturityClass.fromCode(code).ordinal, ordinal)
            self.assertEqual(MaturityClass.fromOrdinal(ordinal).code, code)
        with self.assertRaises(ValueError):
            MaturityClass.fromCode("1w")
        self.assertEqual(monthToLabel(1), "2000-01")
        self.assertEqual(monthToLabel(58), "2004-10")
        self.assertEqual(monthToLabel(12), "2000-12")

    def testBinSet(self):
        bins = BinSet([[4, 5, 6, 7], [0, 1], [2], [3]])
        self.assertEqual(bins.getBins(), [[0, 1], [2], [3], [4, 5, 6, 7]])
        self.assertEqual(bins.getBinCount(), 4)
        self.assertEqual(bins.getBinIndex(5), 3)
        with self.assertRaises(ValueError):
            BinSet([[0, 2], [1]])
        with self.assertRaises(ValueError):
            BinSet([[0, 1], [1, 2]])
        with self.assertRaises(ValueError):
            BinSet([[0], [2]], numLayers=3)
        ncBins = BinSet([[0, 2], [1]], kind="non-contiguous")
        self.assertEqual(ncBins.getKind(), BinSet.NONCONTIGUOUS)
        self.assertEqual(ncBins.getLabels(["A", "B", "C"]), ["A+C", "B"])
        #
        single = BinSet.singletons(4)
        self.assertTrue(single.isSingletons())
        self.assertEqual(single.getMergeCandidates(), [(0, 1), (1, 2), (2, 3)])
        self.assertEqual(BinSet.singletons(4, kind=BinSet.NONCONTIGUOUS).getMergeCandidates(), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        self.assertEqual(single.merge(1, 2), BinSet([[0], [1, 2], [3]]))
        self.assertTrue(BinSet.aggregate(4).isAggregate())

    def testConstructionErrors(self):
        with self.assertRaises(ValueError):
            LayeredMultigraph(["a", "b"], [[(0, 2, 1.0)]], ["<1d"])
        with self.assertRaises(ValueError):
            LayeredMultigraph(["a", "b"], [[(0, 1, 0.0)]], ["<1d"])
        with self.assertRaises(ValueError):
            LayeredMultigraph(["a", "b", "c"], [[(0, 1, 1.0)]], ["<1d"])
        with self.assertRaises(ValueError):
            LayeredMultigraph(["a", "a"], [[(0, 1, 1.0)]], ["<1d"])
        graph = LayeredMultigraph(["a", "b", "c"], [[(0, 1, 1.0)]], ["<1d"], requireActive=False)
        self.assertEqual(graph.getNodeCount(), 3)

    def testCollapse(self):
        graph = LayeredMultigraph(["1", "2"], [[(0, 1, 2.0)], [(0, 1, 3.0), (0, 1, 4.0)]], ["<1d", "2-7d"])
        collapsed = graph.collapse()
        self.assertEqual(collapsed.getLayerCount(), 1)
        self.assertEqual(collapsed.getEdgeCount(), 3)
        self.assertEqual(sorted(wt for _, _, wt in collapsed.getEdges(0)), [2.0, 3.0, 4.0])
        self.assertEqual(collapsed.getLayerLabels(), ["<1d+2-7d"])
        #
        single = LayeredMultigraph(["1", "2"], [[(0, 1, 2.0), (1, 0, 1.5)]], ["<1d"])
        self.assertTrue(single.collapse().isEquivalent(single))
        #
        for seed in range(5):
            graph = self.__randomGraph(seed)
            self.assertEqual(graph.collapse().getEdgeCount(), sum(graph.getEdgeCount(ll) for ll in range(graph.getLayerCount())))
            self.assertTrue(graph.collapse().isEquivalent(graph.mergeLayers(BinSet.aggregate(graph.getLayerCount()))))

    def testMergeLayers(self):
        graph = self.__randomGraph(11, numLayers=8)
        self.assertTrue(graph.mergeLayers(BinSet.singletons(8)).isEquivalent(graph))
        bins = BinSet([[0, 1], [2], [3], [4, 5, 6, 7]])
        merged = graph.mergeLayers(bins)
        self.assertEqual(merged.getLayerCount(), 4)
        self.assertEqual(merged.getLayerLabels()[0], "<1d+2-7d")
        self.assertEqual(merged.getEdgeCount(0), graph.getEdgeCount([0, 1]))
        self.assertEqual(merged.getEdgeCount(3), graph.getEdgeCount([4, 5, 6, 7]))
        #
        coarse = BinSet([[0, 1], [2, 3]])
        twice = merged.mergeLayers(coarse)
        once = graph.mergeLayers(bins.compose(coarse))
        self.assertTrue(twice.isEquivalent(once, compareLabels=False))
        with self.assertRaises(ValueError):
            graph.mergeLayers(BinSet.singletons(3))

    def testStrengthAndSize(self):
        graph = LayeredMultigraph(["a", "b", "c"], [[(0, 1, 7.0)], [(1, 2, 5.0)]], ["<1d", "2-7d"])
        self.assertEqual(graph.strength("a", [0]), (0.0, 7.0, 7.0))
        self.assertEqual(graph.strength("c", [0]), (0.0, 0.0, 0.0))
        self.assertEqual(graph.layerSize([0]), 7.0)
        with self.assertRaises(KeyError):
            graph.strength("zz")
        empty = LayeredMultigraph(["a", "b"], [[(0, 1, 5.0)], []], ["<1d", "2-7d"])
        self.assertEqual(empty.layerSize([0]), 5.0)
        self.assertEqual(empty.layerSize([1]), 0.0)
        #
        for seed in range(5):
            graph = self.__randomGraph(100 + seed)
            for layers in ([0], [1, 2], None):
                sIn, sOut = graph.getStrengths(layers)
                self.assertAlmostEqual(float(np.sum(sIn + sOut)), 2.0 * graph.layerSize(layers), places=6)
            self.assertAlmostEqual(graph.layerSize(), sum(graph.layerSize([ll]) for ll in range(graph.getLayerCount())), places=6)

    def testSerialization(self):
        graph = self.__randomGraph(3)
        dD = graph.toDict()
        self.assertEqual(dD["version"], LayeredMultigraph.VERSION)
        copyG = LayeredMultigraph.fromDict(dD)
        self.assertTrue(copyG.isEquivalent(graph))
        self.assertEqual(copyG.getEdges(1), graph.getEdges(1))
        dD["version"] = 99
        with self.assertRaises(ValueError):
            LayeredMultigraph.fromDict(dD)


def layeredMultigraphSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LayeredMultigraphTests("testMaturityClass"))
    suiteSelect.addTest(LayeredMultigraphTests("testBinSet"))
    suiteSelect.addTest(LayeredMultigraphTests("testConstructionErrors"))
    suiteSelect.addTest(LayeredMultigraphTests("testCollapse"))
    suiteSelect.addTest(LayeredMultigraphTests("testMergeLayers"))
    suiteSelect.addTest(LayeredMultigraphTests("testStrengthAndSize"))
    suiteSelect.addTest(LayeredMultigraphTests("testSerialization"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = layeredMultigraphSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
