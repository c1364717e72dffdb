##
# File:    testLayeredDescriptionLength.py
# Author:  J. Westbrook
# Date:    17-Jan-2026
#
# Updates:
#  24-Jan-2026 jdw non-contiguous bin set prior checks
#  12-Feb-2026 jdw layer-recovery code per group pair; duplicated and identical layer merges
##
"""
Tests for the layered description length: extension term, bin set prior and term composition.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import itertools
import logging
import math
import os
import time
import unittest

import numpy as np
from scipy.special import stirling2

from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDescriptionLength
from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDl
from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.SbmDescriptionLength import SbmDescriptionLength

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


def contiguousBinSets(numLayers):
    """Every contiguous bin set over numLayers ordered layers (one per subset of cut points)."""
    for numCuts in range(numLayers):
        for cutL in itertools.combinations(range(1, numLayers), numCuts):
            edgeL = [0] + list(cutL) + [numLayers]
            yield BinSet([list(range(edgeL[ii], edgeL[ii + 1])) for ii in range(len(edgeL) - 1)])


def compositions(total, parts):
    """Every tuple of parts non-negative integers summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tailT in compositions(total - head, parts - 1):
            yield (head,) + tailT


def setPartitionBinSets(numLayers):
    """Every bin set over numLayers layers with no contiguity restriction."""
    def extend(prefix, maxLabel):
        if len(prefix) == numLayers:
            binD = {}
            for ordinal, lb in enumerate(prefix):
                binD.setdefault(lb, []).append(ordinal)
            yield BinSet(list(binD.values()), kind=BinSet.NONCONTIGUOUS)
            return
        for lb in range(maxLabel + 2):
            yield from extend(prefix + [lb], max(maxLabel, lb))

    yield from extend([0], 0)


class LayeredDescriptionLengthTests(unittest.TestCase):
    def setUp(self):
        self.__ldl = LayeredDescriptionLength()
        self.__png = PlantedNetworkGenerator()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def testExtensionTerm(self):
        graph = LayeredMultigraph(["a", "b"], [[(0, 1, 1.0), (1, 0, 2.0)], [(0, 1, 3.0)], [(1, 0, 4.0)]], ["<1d", "2-7d", "8-30d"])
        self.assertEqual(self.__ldl.extensionTerm(graph, BinSet.singletons(3)), 0.0)
        # 3 edges split (2, 1) after C(4, 1) compositions, less the 2 orderings of the a->b pair
        self.assertAlmostEqual(self.__ldl.extensionTerm(graph, BinSet([[0, 1], [2]])), math.log2(6.0), delta=1.0e-12)
        # 4 edges split (2, 1, 1) after C(6, 2) compositions, less 2 orderings on each pair
        self.assertAlmostEqual(self.__ldl.extensionTerm(graph, BinSet.aggregate(3)), math.log2(45.0), delta=1.0e-12)
        # with a and b apart each direction is its own group pair: (2 * C(4, 2)) ** 2 / 4
        self.assertAlmostEqual(self.__ldl.extensionTerm(graph, BinSet.aggregate(3), Partition([0, 1])), math.log2(36.0), delta=1.0e-12)
        with self.assertRaises(ValueError):
            self.__ldl.extensionTerm(graph, BinSet.singletons(2))
        with self.assertRaises(ValueError):
            self.__ldl.extensionTerm(graph, BinSet.aggregate(3), Partition([0, 1, 1]))
        #
        graph = LayeredMultigraph(["a", "b"], [[(0, 1, 1.0)], [(1, 0, 1.0)]], ["<1d", "2-7d"])
        self.assertAlmostEqual(self.__ldl.extensionTerm(graph, BinSet.aggregate(2)), 1.0 + math.log2(3.0), delta=1.0e-12)
        sparse = LayeredMultigraph(["a", "b"], [[], [], [(0, 1, 1.0)]], ["<1d", "2-7d", "8-30d"])
        self.assertEqual(self.__ldl.extensionTerm(sparse, BinSet([[0, 1], [2]])), 0.0)
        self.assertAlmostEqual(self.__ldl.extensionTerm(sparse, BinSet([[0], [1, 2]])), 1.0, delta=1.0e-12)

    def testExtensionNormalization(self):
        """For a fixed binned graph and partition the code lengths of every split of its edges among the layers form a distribution."""
        pairL = [((0, 1), 2), ((1, 0), 1), ((0, 2), 1), ((2, 2), 1)]
        for numLayers in (2, 3):
            for partition in (Partition.trivial(3), Partition([0, 0, 1]), Partition.singletons(3)):
                total = 0.0
                numSplits = 0
                for splitL in itertools.product(*[list(compositions(mult, numLayers)) for _, mult in pairL]):
                    layers = [[] for _ in range(numLayers)]
                    for ((src, dst), _), countT in zip(pairL, splitL):
                        for ll, cnt in enumerate(countT):
                            layers[ll].extend([(src, dst, 1.0)] * cnt)
                    graph = LayeredMultigraph(["a", "b", "c"], layers, ["L%d" % ll for ll in range(numLayers)], requireActive=False)
                    total += 2.0 ** (-self.__ldl.extensionTerm(graph, BinSet.aggregate(numLayers), partition))
                    numSplits += 1
                logger.debug("Layers %d partition %r: %d splits", numLayers, partition, numSplits)
                self.assertAlmostEqual(total, 1.0, delta=1.0e-10)

    def testDuplicatedLayer(self):
        """A layer repeated verbatim is cheaper inside one bin than beside its copy."""
        rng = np.random.default_rng(11)
        numNodes = 100
        edgeL = list(zip(rng.integers(numNodes, size=318).tolist(), rng.integers(numNodes, size=318).tolist(), rng.lognormal(0.0, 1.0, size=318).tolist()))
        graph = LayeredMultigraph(["n%03d" % ii for ii in range(numNodes)], [edgeL, list(edgeL)], ["<1d", "2-7d"], requireActive=False)
        for partition in (Partition.trivial(numNodes), Partition([ii // 50 for ii in range(numNodes)])):
            merged = self.__ldl.layeredDl(graph, partition, BinSet.aggregate(2)).total
            separate = self.__ldl.layeredDl(graph, partition, BinSet.singletons(2)).total
            logger.info("B=%d merged %.2f bits separate %.2f bits", partition.getGroupCount(), merged, separate)
            self.assertLess(merged, separate)

    def testIdenticalLayersMerge(self):
        """Two layers drawn from the same parameters are cheaper merged at the planted partition."""
        for seed in range(5):
            graph, partition, _ = self.__png.sample(self.__png.singlePatternSpec(numLayers=2), seed)
            merged = self.__ldl.layeredDl(graph, partition, BinSet.aggregate(2)).total
            separate = self.__ldl.layeredDl(graph, partition, BinSet.singletons(2)).total
            logger.info("Seed %d merged %.2f bits separate %.2f bits", seed, merged, separate)
            self.assertLess(merged, separate)

    def testContiguousPrior(self):
        self.assertEqual(LayeredDescriptionLength.binsetPriorBits(1, 1), 0.0)
        self.assertAlmostEqual(LayeredDescriptionLength.binsetPriorBits(4, 8), 3.0 + math.log2(35.0), delta=1.0e-12)
        for numLayers in range(1, 9):
            total = sum(2.0 ** (-self.__ldl.binsetPrior(bins)) for bins in contiguousBinSets(numLayers))
            self.assertAlmostEqual(total, 1.0, delta=1.0e-10)
        with self.assertRaises(ValueError):
            LayeredDescriptionLength.binsetPriorBits(0, 8)
        with self.assertRaises(ValueError):
            LayeredDescriptionLength.binsetPriorBits(9, 8)

    def testNonContiguousPrior(self):
        self.assertAlmostEqual(LayeredDescriptionLength.binsetPriorBits(2, 8, kind=BinSet.NONCONTIGUOUS), 3.0 + math.log2(127.0), delta=1.0e-12)
        for numLayers in range(1, 7):
            countD = {}
            total = 0.0
            for bins in setPartitionBinSets(numLayers):
                countD[bins.getBinCount()] = countD.get(bins.getBinCount(), 0) + 1
                total += 2.0 ** (-self.__ldl.binsetPrior(bins))
            self.assertAlmostEqual(total, 1.0, delta=1.0e-10)
            for numBins, count in countD.items():
                self.assertEqual(count, int(stirling2(numLayers, numBins, exact=True)))
        # contiguous bin sets are a subset, so they are cheaper under their own prior
        for numBins in range(1, 9):
            self.assertLessEqual(
                LayeredDescriptionLength.binsetPriorBits(numBins, 8), LayeredDescriptionLength.binsetPriorBits(numBins, 8, kind=BinSet.NONCONTIGUOUS) + 1.0e-12
            )

    def testComposition(self):
        graph, partition, _ = self.__png.sample(self.__png.granularitySpec(numNodes=30, denseRate=40.0, sparseRate=4.0), 3)
        sbm = SbmDescriptionLength()
        for bins in [BinSet.singletons(3), BinSet([[0, 1], [2]]), BinSet.aggregate(3)]:
            ldl = self.__ldl.layeredDl(graph, partition, bins)
            self.assertEqual(len(ldl.perBin), bins.getBinCount())
            self.assertAlmostEqual(ldl.total, ldl.partitionBits + sum(dl.total for dl in ldl.perBin) + ldl.extensionBits + ldl.binsetPriorBits, delta=1.0e-9)
            self.assertAlmostEqual(ldl.partitionBits, sbm.dlPartition(partition), delta=1.0e-12)
            self.assertAlmostEqual(ldl.extensionBits, self.__ldl.extensionTerm(graph, bins, partition), delta=1.0e-12)
            self.assertEqual(LayeredDl.fromDict(ldl.toDict()), ldl)
        single = self.__ldl.layeredDl(graph, partition, BinSet.singletons(3))
        for layer in range(3):
            self.assertAlmostEqual(single.perBin[layer].total, sbm.layerBreakdown(graph, partition, layer).total, delta=1.0e-9)
        self.assertEqual(single.extensionBits, 0.0)
        #
        collapsed = graph.collapse()
        ldl = self.__ldl.layeredDl(collapsed, partition, BinSet.singletons(1))
        self.assertAlmostEqual(ldl.total, sbm.descriptionLength(collapsed, partition).total, delta=1.0e-9)

    def testPlantedBinsPreferred(self):
        for seed in range(3):
            graph, partition, truthBins = self.__png.sample(self.__png.granularitySpec(), seed)
            truthDl = self.__ldl.layeredDl(graph, partition, truthBins).total
            aggDl = self.__ldl.layeredDl(graph, partition, BinSet.aggregate(3)).total
            logger.info("Seed %d planted bins %.2f bits aggregate %.2f bits", seed, truthDl, aggDl)
            self.assertLess(truthDl, aggDl)
            self.assertGreater(self.__ldl.layeredDl(graph, Partition.trivial(graph.getNodeCount()), truthBins).total, truthDl)


def layeredDescriptionLengthSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LayeredDescriptionLengthTests("testExtensionTerm"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testExtensionNormalization"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testDuplicatedLayer"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testIdenticalLayersMerge"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testContiguousPrior"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testNonContiguousPrior"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testComposition"))
    suiteSelect.addTest(LayeredDescriptionLengthTests("testPlantedBinsPreferred"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = layeredDescriptionLengthSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
