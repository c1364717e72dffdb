##
# File:    testSbmDescriptionLength.py
# Author:  J. Westbrook
# Date:    16-Jan-2026
#
# Updates:
#  23-Jan-2026 jdw incremental move and merge deltas against full recomputation
#  12-Feb-2026 jdw block states over merged bins
##
"""
Tests for the single-layer description length terms (exhaustive normalization checks) and for the
incremental block state.
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
from scipy import integrate
from scipy import stats

from rcsb.utils.layersbm.BlockState import BlockState
from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDescriptionLength
from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.SbmDescriptionLength import LN2
from rcsb.utils.layersbm.SbmDescriptionLength import BlockCounts
from rcsb.utils.layersbm.SbmDescriptionLength import DlBreakdown
from rcsb.utils.layersbm.SbmDescriptionLength import SbmDescriptionLength
from rcsb.utils.layersbm.SbmDescriptionLength import WeightPrior
from rcsb.utils.layersbm.SbmDescriptionLength import lnWeightMarginal

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


def setPartitions(numNodes):
    """Restricted growth strings, one per set partition of numNodes items."""
    def extend(prefix, maxLabel):
        if len(prefix) == numNodes:
            yield list(prefix)
            return
        for lb in range(maxLabel + 2):
            yield from extend(prefix + [lb], max(maxLabel, lb))

    if numNodes == 0:
        return
    yield from extend([0], 0)


class SbmDescriptionLengthTests(unittest.TestCase):
    def setUp(self):
        self.__sbm = SbmDescriptionLength()
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __graphFromPairs(self, numNodes, pairL, weights=None):
        weights = weights if weights is not None else [1.0] * len(pairL)
        edgeL = [(ii, jj, wt) for (ii, jj), wt in zip(pairL, weights)]
        return LayeredMultigraph(["n%d" % ii for ii in range(numNodes)], [edgeL], ["<1d"], requireActive=False)

    def __randomGraph(self, rng, numNodes, numLayers, edgesPerLayer):
        layers = []
        for _ in range(numLayers):
            src = rng.integers(0, numNodes, size=edgesPerLayer)
            dst = rng.integers(0, numNodes, size=edgesPerLayer)
            layers.append((src, dst, rng.lognormal(0.5, 1.0, size=edgesPerLayer)))
        return LayeredMultigraph(["n%02d" % ii for ii in range(numNodes)], layers, ["L%d" % ll for ll in range(numLayers)], requireActive=False)

    def __oracleBits(self, graph, partition):
        bits = self.__sbm.dlPartition(partition, graph.getNodeCount())
        for layer in range(graph.getLayerCount()):
            bits += self.__sbm.layerBreakdown(graph, partition, layer).total
        return bits

    def testAdjacencyNormalization(self):
        """Summing P(A | k, e, b) over every multigraph with the same degrees and block matrix gives 1."""
        caseL = [
            (3, [(0, 1), (1, 2), (2, 0)], [0, 0, 1]),
            (3, [(0, 0), (0, 1), (1, 2)], [0, 1, 1]),
            (4, [(0, 1), (1, 2), (2, 3), (3, 0)], [0, 1, 0, 1]),
            (4, [(0, 1), (0, 1), (2, 3), (3, 3)], [0, 0, 1, 1]),
            (4, [(0, 2), (1, 3), (2, 1), (3, 0)], [0, 0, 0, 0]),
        ]
        for numNodes, refPairL, assignL in caseL:
            partition = Partition(assignL)
            refBc = self.__sbm.blockCounts(self.__graphFromPairs(numNodes, refPairL), partition)
            allPairL = [(ii, jj) for ii in range(numNodes) for jj in range(numNodes)]
            total = 0.0
            count = 0
            for pairL in itertools.combinations_with_replacement(allPairL, len(refPairL)):
                graph = self.__graphFromPairs(numNodes, list(pairL))
                bc = self.__sbm.blockCounts(graph, partition)
                if not (np.array_equal(bc.kOut, refBc.kOut) and np.array_equal(bc.kIn, refBc.kIn) and np.array_equal(bc.ers, refBc.ers)):
                    continue
                total += 2.0 ** (-self.__sbm.dlAdjacency(graph, partition))
                count += 1
            logger.info("N=%d E=%d: %d multigraphs, total probability %.12f", numNodes, len(refPairL), count, total)
            self.assertAlmostEqual(total, 1.0, delta=1.0e-10)

    def testPartitionPriorNormalization(self):
        """Each set partition with B groups stands for B! labeled assignments."""
        for numNodes in range(1, 7):
            total = 0.0
            for assignL in setPartitions(numNodes):
                partition = Partition(assignL)
                total += math.factorial(partition.getGroupCount()) * 2.0 ** (-self.__sbm.dlPartition(partition))
            self.assertAlmostEqual(total, 1.0, delta=1.0e-10)
        self.assertAlmostEqual(self.__sbm.dlPartition(Partition([0])), 0.0, delta=1.0e-12)

    def testEdgeMatrixNormalization(self):
        for numGroups, numEdges in [(1, 4), (2, 3), (3, 2)]:
            total = 0.0
            for cellL in itertools.product(range(numEdges + 1), repeat=numGroups * numGroups):
                if sum(cellL) != numEdges:
                    continue
                ers = np.array(cellL).reshape((numGroups, numGroups))
                total += 2.0 ** (-self.__sbm.dlEdgeMatrix(ers, numGroups=numGroups, numEdges=numEdges))
            self.assertAlmostEqual(total, 1.0, delta=1.0e-10)
        with self.assertRaises(ValueError):
            self.__sbm.dlEdgeMatrix(np.array([[1, 1], [0, 1]]), numEdges=4)

    def testDegreeNormalization(self):
        groupOf = np.array([0, 0, 1, 1])
        ers = np.array([[1, 1], [0, 1]])
        eOut = ers.sum(axis=1)
        eIn = ers.sum(axis=0)
        nR = np.array([2, 2])
        outL = [kV for kV in itertools.product(range(3), repeat=4) if np.array_equal(np.bincount(groupOf, weights=kV, minlength=2), eOut)]
        inL = [kV for kV in itertools.product(range(3), repeat=4) if np.array_equal(np.bincount(groupOf, weights=kV, minlength=2), eIn)]
        total = 0.0
        for kOut in outL:
            for kIn in inL:
                bc = BlockCounts(ers, eOut, eIn, nR, np.array(kOut), np.array(kIn), groupOf)
                total += 2.0 ** (-self.__sbm.dlDegrees(bc))
        self.assertAlmostEqual(total, 1.0, delta=1.0e-10)
        with self.assertRaises(ValueError):
            self.__sbm.dlDegrees(BlockCounts(ers, eOut, eIn, nR, np.array([1, 0, 0, 0]), np.array([1, 0, 1, 1]), groupOf))

    def testWeightTerm(self):
        graph = self.__graphFromPairs(2, [(0, 1)], weights=[1.0])
        bits = self.__sbm.dlWeights(graph, Partition([0, 1]))
        expected = -stats.t.logpdf(0.0, df=1, loc=0.0, scale=math.sqrt(2.0)) / LN2
        self.assertAlmostEqual(bits, expected, delta=1.0e-10)
        self.assertAlmostEqual(bits, math.log2(math.pi * math.sqrt(2.0)), delta=1.0e-10)
        #
        prior = WeightPrior()
        density, _ = integrate.quad(lambda zz: math.exp(lnWeightMarginal(1, zz, zz * zz, prior)), -np.inf, np.inf)
        self.assertAlmostEqual(density, 1.0, delta=1.0e-7)
        #
        z1, z2 = 0.7, -1.3
        scale1 = math.sqrt((1.0 + 0.5 * z1 * z1) / 2.0 * (1.0 + 1.0 / 2.0))
        chain = stats.t.logpdf(z1, df=1, loc=0.0, scale=math.sqrt(2.0)) + stats.t.logpdf(z2, df=2, loc=z1 / 2.0, scale=scale1)
        self.assertAlmostEqual(lnWeightMarginal(2, z1 + z2, z1 * z1 + z2 * z2, prior), chain, delta=1.0e-10)
        #
        wideGraph = self.__graphFromPairs(2, [(0, 1)] * 5, weights=[0.5, 2.0, 8.0, 1.5, 3.0])
        self.assertTrue(np.isfinite(self.__sbm.dlWeights(wideGraph, Partition([0, 0]))))
        with self.assertRaises(ValueError):
            SbmDescriptionLength(weightPrior=WeightPrior(0.0, 0.0, 1.0, 1.0))

    def testBreakdown(self):
        rng = np.random.default_rng(17)
        graph = self.__randomGraph(rng, 10, 1, 40)
        partition = Partition(rng.integers(0, 3, size=10).tolist())
        dl = self.__sbm.descriptionLength(graph, partition)
        self.assertAlmostEqual(dl.total, dl.bitsPartition + dl.bitsEdgeMatrix + dl.bitsDegrees + dl.bitsAdjacency + dl.bitsWeights, delta=1.0e-9)
        self.assertAlmostEqual(dl.getDataBits() + dl.getModelBits(), dl.total, delta=1.0e-9)
        self.assertEqual(DlBreakdown.fromDict(dl.toDict()), dl)
        self.assertEqual(self.__sbm.layerBreakdown(graph, partition).bitsPartition, 0.0)
        with self.assertRaises(ValueError):
            self.__sbm.descriptionLength(graph, Partition([0, 1]))

    def testBlockStateMatchesFullComputation(self):
        rng = np.random.default_rng(23)
        for trial in range(3):
            graph = self.__randomGraph(rng, 14, 2, 45)
            partition = Partition(rng.integers(0, 4, size=14).tolist())
            state = BlockState(graph, partition)
            self.assertAlmostEqual(state.entropyBits(), self.__oracleBits(graph, partition), delta=1.0e-9)
            for layer in range(graph.getLayerCount()):
                bc = state.getBlockCounts(layer)
                self.assertTrue(np.array_equal(bc.ers, self.__sbm.blockCounts(graph, partition, layer).ers))
            logger.info("Trial %d initial %.6f bits", trial, state.entropyBits())

    def testBlockStateMoves(self):
        rng = np.random.default_rng(31)
        graph = self.__randomGraph(rng, 12, 3, 30)
        state = BlockState(graph, Partition(rng.integers(0, 4, size=12).tolist()))
        for _ in range(300):
            node = int(rng.integers(0, 12))
            groupL = state.getGroups()
            target = int(rng.choice(groupL + [max(groupL) + 1]))
            before = state.entropy()
            predicted = state.moveDelta(node, target)
            applied = state.moveNode(node, target)
            self.assertEqual(predicted, applied)
            self.assertAlmostEqual(state.entropy() - before, predicted, delta=1.0e-9)
        self.assertTrue(state.checkConsistency())
        self.assertAlmostEqual(state.entropyBits(), self.__oracleBits(graph, state.getPartition()), delta=1.0e-8)
        self.assertEqual(sum(state.getGroupSizes().values()), 12)

    def testBlockStateMerges(self):
        rng = np.random.default_rng(47)
        graph = self.__randomGraph(rng, 16, 2, 50)
        state = BlockState(graph, Partition.singletons(16))
        while state.getGroupCount() > 1:
            groupL = state.getGroups()
            fromGroup, toGroup = [int(gg) for gg in rng.choice(groupL, size=2, replace=False)]
            before = state.entropy()
            predicted = state.mergeDelta(fromGroup, toGroup)
            state.mergeGroups(fromGroup, toGroup)
            self.assertAlmostEqual(state.entropy() - before, predicted, delta=1.0e-9)
            self.assertAlmostEqual(state.entropyBits(), self.__oracleBits(graph, state.getPartition()), delta=1.0e-8)
        self.assertTrue(state.checkConsistency())
        with self.assertRaises(ValueError):
            state.mergeDelta(state.getGroups()[0], state.getGroups()[0])

    def testBlockStateBins(self):
        """States over merged bins track the layer-recovery code through moves and merges."""
        rng = np.random.default_rng(59)
        ldl = LayeredDescriptionLength()
        graph = self.__randomGraph(rng, 8, 3, 40)

        def oracleBits(bins, partition):
            dl = ldl.layeredDl(graph, partition, bins)
            return dl.total - dl.binsetPriorBits

        for bins in (BinSet([[0, 1], [2]]), BinSet.aggregate(3)):
            state = BlockState(graph, Partition(rng.integers(0, 3, size=8).tolist()), bins=bins)
            self.assertEqual(state.getLayerCount(), bins.getBinCount())
            self.assertAlmostEqual(state.entropyBits(), oracleBits(bins, state.getPartition()), delta=1.0e-9)
            for _ in range(200):
                node = int(rng.integers(0, 8))
                groupL = state.getGroups()
                target = int(rng.choice(groupL + [max(groupL) + 1]))
                before = state.entropy()
                predicted = state.moveNode(node, target)
                self.assertAlmostEqual(state.entropy() - before, predicted, delta=1.0e-9)
            self.assertTrue(state.checkConsistency())
            self.assertAlmostEqual(state.entropyBits(), oracleBits(bins, state.getPartition()), delta=1.0e-8)
            while state.getGroupCount() > 1:
                groupL = state.getGroups()
                predicted = state.mergeDelta(groupL[-1], groupL[0])
                before = state.entropy()
                state.mergeGroups(groupL[-1], groupL[0])
                self.assertAlmostEqual(state.entropy() - before, predicted, delta=1.0e-9)
                self.assertAlmostEqual(state.entropyBits(), oracleBits(bins, state.getPartition()), delta=1.0e-8)
            self.assertTrue(state.checkConsistency())
        with self.assertRaises(ValueError):
            BlockState(graph, Partition.trivial(8), bins=BinSet.aggregate(2))


def sbmDescriptionLengthSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(SbmDescriptionLengthTests("testAdjacencyNormalization"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testPartitionPriorNormalization"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testEdgeMatrixNormalization"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testDegreeNormalization"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testWeightTerm"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testBreakdown"))
    return suiteSelect


def blockStateSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(SbmDescriptionLengthTests("testBlockStateMatchesFullComputation"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testBlockStateMoves"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testBlockStateMerges"))
    suiteSelect.addTest(SbmDescriptionLengthTests("testBlockStateBins"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = sbmDescriptionLengthSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
    mySuite = blockStateSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
