##
# File:    testLoanRecordProvider.py
# Author:  J. Westbrook
# Date:    13-Jan-2026
#
# Updates:
#  27-Jan-2026 jdw add row-numbered error and self-loop diagnostic cases
##
"""
Tests for loan record CSV reading and writing, monthly ingestion and the monthly graph store.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import os
import time
import unittest

from rcsb.utils.io.MarshalUtil import MarshalUtil
from rcsb.utils.layersbm.LayeredMultigraph import LoanRecord
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.LoanRecordProvider import LoanRecordProvider
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class LoanRecordProviderTests(unittest.TestCase):
    def setUp(self):
        self.__workPath = os.path.join(HERE, "test-output", "loan-records")
        self.__mU = MarshalUtil(workPath=self.__workPath)
        self.__mU.mkdir(self.__workPath)
        self.__lrp = LoanRecordProvider(workPath=self.__workPath)
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __writeLines(self, fileName, lineL):
        filePath = os.path.join(self.__workPath, fileName)
        ok = self.__mU.doExport(filePath, lineL, fmt="list")
        self.assertTrue(ok)
        return filePath

    def __syntheticSeries(self, seed):
        png = PlantedNetworkGenerator()
        spec = PlantedSpec([20, 20], [[[14.0, 7.0], [7.0, 14.0]]], [0] * 8, [(1.0, 1.0)])
        return png.sampleSeries(spec, [1, 2, 3], seed)

    def testIngestParallelEdges(self):
        recL = [LoanRecord("A", "B", 3, 10.0, MaturityClass.LT_1D, None), LoanRecord("A", "B", 3, 5.0, "<1d", 7.5)]
        graphD = self.__lrp.ingest(recL)
        self.assertEqual(list(graphD.keys()), [3])
        graph = graphD[3]
        self.assertEqual(graph.getNodes(), ["A", "B"])
        self.assertEqual(graph.getLayerCount(), 8)
        self.assertEqual(graph.getEdges(0), [(0, 1, 10.0), (0, 1, 5.0)])
        self.assertEqual(graph.getEdgeCount([1, 2, 3, 4, 5, 6, 7]), 0)

    def testIngestErrors(self):
        with self.assertRaisesRegex(ValueError, "row 2"):
            self.__lrp.ingest([LoanRecord("A", "B", 1, 1.0, "<1d", None), LoanRecord("A", "C", 1, 0.0, "<1d", None)])
        with self.assertRaisesRegex(ValueError, "row 1"):
            self.__lrp.ingest([LoanRecord("A", "B", 1, 1.0, "1w", None)])
        with self.assertRaisesRegex(ValueError, "row 1"):
            self.__lrp.ingest([LoanRecord("A", "B", 1, 1.0, "<1d", -2.0)])
        #
        csvPath = self.__writeLines("bad-rows.csv", ["lender,borrower,month,amount,maturity,rate", "A,B,1,3.5,<1d,", "A,B,1,abc,<1d,"])
        with self.assertRaisesRegex(ValueError, "row 2"):
            self.__lrp.readRecords(csvPath)
        csvPath = self.__writeLines("bad-header.csv", ["lender,borrower,month,amount,rate", "A,B,1,3.5,"])
        with self.assertRaises(ValueError):
            self.__lrp.readRecords(csvPath)
        csvPath = os.path.join(self.__workPath, "empty.csv")
        with open(csvPath, "w", encoding="utf-8"):
            pass
        with self.assertRaises(ValueError):
            self.__lrp.readRecords(csvPath)

    def testReadCommentsAndSelfLoops(self):
        lineL = [
            "# exported fixture",
            "lender,borrower,month,amount,maturity,rate",
            "",
            "A,B,1,3.5,<1d,",
            "# comment between rows",
            "B,B,1,2.0,2-7d,6.25",
            "C,A,2,1.0,>3y,12.0",
        ]
        recL = self.__lrp.readRecords(self.__writeLines("fixture.csv", lineL))
        self.assertEqual(len(recL), 3)
        self.assertIsNone(recL[0].rate)
        self.assertEqual(recL[1].maturity, MaturityClass.D_2_7)
        self.assertEqual(recL[2].rate, 12.0)
        graphD = self.__lrp.ingest(recL)
        self.assertEqual(sorted(graphD), [1, 2])
        self.assertEqual(graphD[1].getSelfLoopCount(), 1)
        self.assertEqual(self.__lrp.getDiagnostics()[1]["self_loops"], 1)
        self.assertEqual(self.__lrp.getBankIndex(), {"A": 0, "B": 1, "C": 2})

    def testRecordRoundTrip(self):
        graphD = self.__syntheticSeries(5)
        png = PlantedNetworkGenerator()
        recL = []
        for month in sorted(graphD):
            recL.extend(png.emitLoanRecords(graphD[month], month))
        logger.info("Round trip over %d records", len(recL))
        self.assertGreater(len(recL), 800)
        csvPath = os.path.join(self.__workPath, "round-trip.csv")
        ok = self.__lrp.writeRecords(recL, csvPath, headerComment="seed=5")
        self.assertTrue(ok)
        readL = self.__lrp.readRecords(csvPath)
        self.assertEqual(readL, recL)
        ingestD = self.__lrp.ingest(readL)
        self.assertEqual(sorted(ingestD), sorted(graphD))
        for month, graph in graphD.items():
            self.assertTrue(ingestD[month].isEquivalent(graph))
            for layer in range(graph.getLayerCount()):
                self.assertEqual(ingestD[month].getEdges(layer), graph.getEdges(layer))
        #
        csvPath2 = os.path.join(self.__workPath, "round-trip-2.csv")
        recL2 = []
        for month in sorted(ingestD):
            recL2.extend(png.emitLoanRecords(ingestD[month], month))
        self.__lrp.writeRecords(recL2, csvPath2, headerComment="seed=5")
        self.assertEqual(self.__mU.doImport(csvPath, fmt="list"), self.__mU.doImport(csvPath2, fmt="list"))

    def testGraphStore(self):
        graphD = self.__syntheticSeries(9)
        storePath = os.path.join(self.__workPath, "store")
        ok = self.__lrp.exportStore(graphD, storePath, meta={"seed": 9})
        self.assertTrue(ok)
        for month in graphD:
            self.assertTrue(os.path.exists(os.path.join(storePath, self.__lrp.getGraphFileName(month))))
        lrp = LoanRecordProvider(workPath=storePath)
        readD = lrp.importStore(storePath)
        self.assertEqual(sorted(readD), [1, 2, 3])
        for month, graph in graphD.items():
            self.assertTrue(readD[month].isEquivalent(graph))
        bankS = set()
        for graph in graphD.values():
            bankS.update(graph.getNodes())
        self.assertEqual(sorted(lrp.getBankIndex()), sorted(bankS))


def loanRecordSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LoanRecordProviderTests("testIngestParallelEdges"))
    suiteSelect.addTest(LoanRecordProviderTests("testIngestErrors"))
    suiteSelect.addTest(LoanRecordProviderTests("testReadCommentsAndSelfLoops"))
    suiteSelect.addTest(LoanRecordProviderTests("testRecordRoundTrip"))
    suiteSelect.addTest(LoanRecordProviderTests("testGraphStore"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = loanRecordSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
