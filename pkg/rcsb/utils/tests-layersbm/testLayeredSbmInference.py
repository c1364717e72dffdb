##
# File:    testLayeredSbmInference.py
# Author:  J. Westbrook
# Date:    26-Jan-2026
#
# Updates:
#   1-Feb-2026 jdw granularity recovery on planted networks
#   4-Feb-2026 jdw configuration from ConfigUtil and multi-proc restarts
#  12-Feb-2026 jdw seed sweeps for the benchmark, granularity, single-pattern, multi-pattern and single-group cases
##
"""
Tests for partition and granularity inference.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import collections
import logging
import math
import os
import time
import unittest

import numpy as np

from rcsb.utils.config.ConfigUtil import ConfigUtil
from rcsb.utils.layersbm.LayeredDescriptionLength import LayeredDescriptionLength
from rcsb.utils.layersbm.LayeredMultigraph import BinSet
from rcsb.utils.layersbm.LayeredMultigraph import LayeredMultigraph
from rcsb.utils.layersbm.LayeredSbmInference import FitConfig
from rcsb.utils.layersbm.LayeredSbmInference import FitResult
from rcsb.utils.layersbm.LayeredSbmInference import LayeredSbmInference
from rcsb.utils.layersbm.MonthlySeriesAnalysis import MonthlySeriesAnalysis
from rcsb.utils.layersbm.Partition import Partition
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec
from rcsb.utils.layersbm.SbmDescriptionLength import SbmDescriptionLength

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


def setPartitions(numNodes):
    def extend(prefix, maxLabel):
        if len(prefix) == numNodes:
            yield list(prefix)
            return
        for lb in range(maxLabel + 2):
            yield from extend(prefix + [lb], max(maxLabel, lb))

    yield from extend([0], 0)


class LayeredSbmInferenceTests(unittest.TestCase):
    def setUp(self):
        self.__configPath = os.path.join(HERE, "test-data", "layersbm-test-config.yml")
        self.__png = PlantedNetworkGenerator()
        self.__fastConfig = FitConfig(seed=3, nSweeps=30, nLevelSweeps=4, nAnneal=2, samples=50)
        self.__benchConfig = FitConfig(seed=3, nSweeps=10, nLevelSweeps=2, nAnneal=1, samples=20)
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __totalBits(self, graph, partition):
        sbm = SbmDescriptionLength()
        bits = sbm.dlPartition(partition)
        for layer in range(graph.getLayerCount()):
            bits += sbm.layerBreakdown(graph, partition, layer).total
        return bits

    def __smallGraph(self, instance):
        """Six banks in two planted triples; one layer for even instances, two for odd ones."""
        rng = np.random.default_rng([17, instance])
        layers = []
        for layer in range(1 + instance % 2):
            edgeL = []
            for ii in range(6):
                for jj in range(6):
                    rate = 1.2 if ii // 3 == jj // 3 else 0.15
                    for _ in range(int(rng.poisson(rate))):
                        edgeL.append((ii, jj, float(rng.lognormal(0.5 * layer, 0.5))))
            layers.append(edgeL)
        return LayeredMultigraph(["n%d" % ii for ii in range(6)], layers, ["<1d", "2-7d"][: len(layers)], requireActive=False)

    def testFitConfig(self):
        cfgOb = ConfigUtil(configPath=self.__configPath, defaultSectionName=FitConfig.SECTION_NAME, mockTopPath=None)
        config = FitConfig.fromConfig(cfgOb)
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.nSweeps, 40)
        self.assertEqual(config.binningKind, BinSet.CONTIGUOUS)
        self.assertEqual(config.getBetaSchedule(3), [1.0, 5.5, 10.0])
        self.assertEqual(config.getFinalBeta(), 10.0)
        #
        ncConfig = FitConfig.fromConfig(cfgOb, sectionName="layersbm_noncontiguous", seed=99, numProc=None)
        self.assertEqual(ncConfig.seed, 99)
        self.assertEqual(ncConfig.binningKind, BinSet.NONCONTIGUOUS)
        self.assertAlmostEqual(ncConfig.getBetaSchedule(3)[1], math.sqrt(8.0), places=12)
        #
        self.assertEqual(config.getConfigHash(), config.copy(numProc=4).getConfigHash())
        self.assertNotEqual(config.getConfigHash(), config.copy(seed=8).getConfigHash())
        self.assertEqual(config.copy().toDict(), config.toDict())
        for badD in [{"seed": -1}, {"nAnneal": 0}, {"epsilon": 0.0}, {"betaMoves": "cubic:1:2"}, {"betaMoves": "linear:0:2"}, {"binningKind": "sideways"}]:
            with self.assertRaises(ValueError):
                FitConfig(**badD)

    def testExhaustiveOptimum(self):
        """The partition and granularity fits reach the minimum over every set partition of small graphs."""
        ldl = LayeredDescriptionLength()
        inf = LayeredSbmInference(FitConfig(seed=1, nSweeps=50, nLevelSweeps=5, nAnneal=3))
        numHits = 0
        for instance in range(50):
            graph = self.__smallGraph(instance)
            numLayers = graph.getLayerCount()
            if numLayers == 1:
                bestBits = min(self.__totalBits(graph, Partition(assignL)) for assignL in setPartitions(6))
                partition, bits = inf.fitPartition(graph)
                self.assertAlmostEqual(bits, self.__totalBits(graph, partition), delta=1.0e-9)
            else:
                bestBits = min(ldl.layeredDl(graph, Partition(assignL), bins).total for assignL in setPartitions(6) for bins in (BinSet.singletons(2), BinSet.aggregate(2)))
                og = inf.inferOg(graph)
                bits = og.dl.total
                self.assertAlmostEqual(bits, ldl.layeredDl(graph, og.partition, og.bins).total, delta=1.0e-9)
            self.assertGreaterEqual(bits, bestBits - 1.0e-9)
            hit = bits <= bestBits + 1.0e-6
            numHits += hit
            logger.debug("Instance %d L=%d best %.4f found %.4f", instance, numLayers, bestBits, bits)
        logger.info("Exhaustive optimum reached on %d of 50 instances", numHits)
        self.assertGreaterEqual(numHits, 45)

    def testSamplerStationarity(self):
        """At fixed group count and beta 1 the move chain visits partitions with probability proportional to 2^-bits."""
        edgeL = [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 0.5), (3, 4, 1.5), (4, 3, 1.0), (2, 3, 3.0), (0, 4, 1.0)]
        graph = LayeredMultigraph(["n%d" % ii for ii in range(5)], [edgeL], ["<1d"])
        targetD = {}
        for assignL in setPartitions(5):
            partition = Partition(assignL)
            if partition.getGroupCount() == 2:
                targetD[tuple(partition.getAssignment())] = 2.0 ** (-self.__totalBits(graph, partition))
        norm = sum(targetD.values())
        inf = LayeredSbmInference(FitConfig(seed=5, epsilon=0.3))
        numSweeps = 30000
        stateL = inf.samplePartitions(graph, Partition([0, 0, 0, 1, 1]), numSweeps, seed=[5, 1], beta=1.0)
        self.assertEqual(len(stateL), numSweeps)
        countD = collections.Counter(tuple(Partition(list(st)).getAssignment()) for st in stateL)
        self.assertTrue(set(countD).issubset(set(targetD)))
        tv = 0.5 * sum(abs(countD.get(key, 0) / float(numSweeps) - val / norm) for key, val in targetD.items())
        logger.info("Total variation distance %.4f over %d partitions", tv, len(targetD))
        self.assertLess(tv, 0.05)

    def testDeterminism(self):
        graph, _, _ = self.__png.sample(self.__png.twoBlockSpec(numNodes=40, withinRate=80.0, betweenRate=8.0), 4)
        fitA = LayeredSbmInference(self.__fastConfig).fitBins(graph, BinSet.singletons(1))
        fitB = LayeredSbmInference(self.__fastConfig).fitBins(graph, BinSet.singletons(1))
        self.assertEqual(fitA.partition, fitB.partition)
        self.assertEqual(fitA.dl, fitB.dl)
        self.assertEqual(fitA.trace, fitB.trace)
        self.assertEqual(FitResult.fromDict(fitA.toDict()).toDict(), fitA.toDict())
        self.assertLessEqual(len(fitA.trace), self.__fastConfig.samples)
        fitC = LayeredSbmInference(self.__fastConfig.copy(numProc=2)).fitBins(graph, BinSet.singletons(1))
        self.assertEqual(fitA.partition, fitC.partition)
        self.assertEqual(fitA.dl.total, fitC.dl.total)

    def testTwoBlockRecovery(self):
        msa = MonthlySeriesAnalysis()
        for seed in range(3):
            graph, truth, _ = self.__png.sample(self.__png.twoBlockSpec(), seed)
            partition, bits = LayeredSbmInference(self.__fastConfig.copy(seed=seed)).fitPartition(graph)
            score = msa.nmi(partition, truth)
            logger.info("Seed %d B=%d NMI %.4f (%.2f bits)", seed, partition.getGroupCount(), score, bits)
            self.assertGreaterEqual(score, 0.95)
            self.assertLessEqual(bits, self.__totalBits(graph, truth) + 1.0e-6)

    def testCorePeripheryBenchmark(self):
        """The three-layer benchmark bins the two core-periphery layers together and keeps the community layer apart."""
        ldl = LayeredDescriptionLength()
        planted = BinSet([[0, 1], [2]])
        numHits = 0
        for seed in range(20):
            graph = self.__png.corePeripheryBenchmark(seed)
            inf = LayeredSbmInference(self.__benchConfig.copy(seed=seed))
            seedStart = time.time()
            og, log10Diff, log10Agg = inf.rejectReport(graph)
            self.assertLess(time.time() - seedStart, 180.0)
            logger.info("Seed %d bins %r B=%d log10 odds %.2f / %.2f", seed, og.bins.getLabels(graph.getLayerLabels()), og.partition.getGroupCount(), log10Diff, log10Agg)
            numHits += og.bins == planted
            self.assertLess(log10Diff, -10.0)
            self.assertLess(log10Agg, 0.0)
            self.assertEqual(len(og.path), 3)
            self.assertEqual(og.path[0][0], [[0], [1], [2]])
            self.assertEqual(og.path[-1][0], [[0, 1, 2]])
            #
            pathD = {str(binL): bits for binL, bits in og.path}
            bitsD = {}
            for binL in ([[0, 1], [2]], [[0], [1, 2]], [[0, 1, 2]]):
                bins = BinSet(binL)
                fitBits = pathD[str(binL)] if str(binL) in pathD else inf.fitBins(graph, bins).dl.total
                bitsD[str(binL)] = min(fitBits, ldl.layeredDl(graph, og.partition, bins).total)
            logger.info("Seed %d ordering %r", seed, bitsD)
            self.assertLess(bitsD["[[0, 1], [2]]"], bitsD["[[0], [1, 2]]"])
            self.assertLess(bitsD["[[0], [1, 2]]"], bitsD["[[0, 1, 2]]"])
        self.assertGreaterEqual(numHits, 18)

    def testGranularityRecovery(self):
        """Two parameter-identical layers and a third with its own pattern bin as {{0, 1}, {2}}."""
        expected = BinSet([[0, 1], [2]])
        numHits = 0
        for seed in range(20):
            graph, _, truthBins = self.__png.sample(self.__png.granularitySpec(), seed)
            self.assertEqual(truthBins, expected)
            og = LayeredSbmInference(self.__benchConfig.copy(seed=seed)).inferOg(graph)
            logger.info("Seed %d bins %r B=%d", seed, og.bins.getBins(), og.partition.getGroupCount())
            numHits += og.bins == expected
        self.assertGreaterEqual(numHits, 18)

    def testSinglePatternAggregation(self):
        """Layers drawn from one pattern are not split apart."""
        numHits = 0
        for seed in range(20):
            graph, _, truthBins = self.__png.sample(self.__png.singlePatternSpec(), seed)
            self.assertEqual(truthBins, BinSet.aggregate(3))
            og = LayeredSbmInference(self.__benchConfig.copy(seed=seed)).inferOg(graph)
            logger.info("Seed %d bins %r", seed, og.bins.getBins())
            numHits += og.bins.isAggregate()
        self.assertGreaterEqual(numHits, 18)

    def testMultiPatternSeries(self):
        """Complete aggregation is rejected in every month of a two-pattern series."""
        spec = self.__png.multiPatternSpec()
        seriesD = self.__png.sampleSeries(spec, [1, 2, 3, 4], 5)
        for month, graph in sorted(seriesD.items()):
            og, _, log10Agg = LayeredSbmInference(self.__benchConfig.copy(seed=month)).rejectReport(graph)
            logger.info("Month %d bins %r log10 odds of aggregation %.2f", month, og.bins.getBins(), log10Agg)
            self.assertLess(log10Agg, -2.0)

    def testErdosRenyiSingleGroup(self):
        """Graphs without planted groups fit a single group."""
        spec = PlantedSpec([60], [[[600.0]]], [0], [(0.0, 1.0)])
        numHits = 0
        for seed in range(20):
            graph, _, _ = self.__png.sample(spec, seed)
            partition, bits = LayeredSbmInference(self.__benchConfig.copy(seed=seed)).fitPartition(graph)
            logger.info("Seed %d B=%d %.2f bits", seed, partition.getGroupCount(), bits)
            numHits += partition.getGroupCount() == 1
        self.assertGreaterEqual(numHits, 16)

    def testNonContiguousPath(self):
        specD = self.__png.granularitySpec(numNodes=40).toDict()
        specD["layer_classes"] = [0, 1, 0]
        spec = PlantedSpec.fromDict(specD)
        graph, _, truthBins = self.__png.sample(spec, 8)
        self.assertEqual(truthBins, BinSet([[0, 2], [1]], kind=BinSet.NONCONTIGUOUS))
        inf = LayeredSbmInference(self.__fastConfig.copy(binningKind="noncontiguous"))
        pathL = inf.inferOgPath(graph)
        self.assertEqual(len(pathL), 3)
        og = inf.inferOg(graph, pathL=pathL)
        self.assertEqual(og.bins.getBins(), [[0, 2], [1]])
        self.assertEqual(og.bins.getKind(), BinSet.NONCONTIGUOUS)

    def testPosteriorOdds(self):
        graphA, _, _ = self.__png.sample(self.__png.twoBlockSpec(numNodes=20, withinRate=30.0, betweenRate=3.0), 1)
        graphB, _, _ = self.__png.sample(self.__png.twoBlockSpec(numNodes=20, withinRate=30.0, betweenRate=3.0), 2)
        inf = LayeredSbmInference(self.__fastConfig)
        fitA = inf.fitBins(graphA, BinSet.singletons(1))
        fitB = inf.fitBins(graphB, BinSet.singletons(1))
        self.assertEqual(LayeredSbmInference.posteriorOdds(fitA, fitA), 0.0)
        with self.assertRaises(ValueError):
            LayeredSbmInference.posteriorOdds(fitA, fitB)
        worse = fitA._replace(dl=fitA.dl._replace(total=fitA.dl.total + 10.0))
        self.assertAlmostEqual(LayeredSbmInference.posteriorOdds(worse, fitA), -10.0 * math.log10(2.0), places=12)


def inferenceSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LayeredSbmInferenceTests("testFitConfig"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testExhaustiveOptimum"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testSamplerStationarity"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testDeterminism"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testTwoBlockRecovery"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testErdosRenyiSingleGroup"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testPosteriorOdds"))
    return suiteSelect


def granularitySuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LayeredSbmInferenceTests("testCorePeripheryBenchmark"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testGranularityRecovery"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testSinglePatternAggregation"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testMultiPatternSeries"))
    suiteSelect.addTest(LayeredSbmInferenceTests("testNonContiguousPath"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = inferenceSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
    mySuite = granularitySuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
