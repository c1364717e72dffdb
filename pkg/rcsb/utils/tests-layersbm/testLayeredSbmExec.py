##
# File:    testLayeredSbmExec.py
# Author:  J. Westbrook
# Date:    11-Feb-2026
#
# Updates:
#
##
"""
End to end tests for the layersbm_exec command line interface.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import logging
import os
import shutil
import time
import unittest

from rcsb.utils.io.MarshalUtil import MarshalUtil
from rcsb.utils.layersbm.LoanRecordProvider import LoanRecordProvider
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec
from rcsb.utils.layersbm.cli.LayeredSbmExec import buildParser
from rcsb.utils.layersbm.cli.LayeredSbmExec import main

logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
logger = logging.getLogger()
logger.setLevel(logging.INFO)

HERE = os.path.abspath(os.path.dirname(__file__))
TOPDIR = os.path.dirname(os.path.dirname(os.path.dirname(HERE)))


class LayeredSbmExecTests(unittest.TestCase):
    def setUp(self):
        self.__workPath = os.path.join(HERE, "test-output", "layersbm-exec", self._testMethodName)
        if os.path.exists(self.__workPath):
            shutil.rmtree(self.__workPath)
        self.__mU = MarshalUtil(workPath=self.__workPath)
        self.__mU.mkdir(self.__workPath)
        self.__configPath = os.path.join(HERE, "test-data", "layersbm-test-config.yml")
        self.__specPath = os.path.join(self.__workPath, "small-spec.json")
        spec = PlantedSpec([10, 10], [[[15.0, 2.0], [2.0, 15.0]]], [0, 0], [(1.0, 0.5)])
        self.__mU.doExport(self.__specPath, spec.toDict(), fmt="json", indent=2)
        self.__startTime = time.time()
        logger.debug("Starting %s at %s", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()))

    def tearDown(self):
        endTime = time.time()
        logger.debug("Completed %s at %s (%.4f seconds)", self.id(), time.strftime("%Y %m %d %H:%M:%S", time.localtime()), endTime - self.__startTime)

    def __path(self, *parts):
        return os.path.join(self.__workPath, *parts)

    def __generateAndIngest(self):
        self.assertEqual(main(["generate", "--spec", self.__specPath, "--months", "1,2", "--seed", "7", "--rates", "--out", self.__path("synth")]), 0)
        self.assertEqual(main(["ingest", "--csv", self.__path("synth", "records.csv"), "--out", self.__path("store")]), 0)

    def __fit(self, outDir):
        argL = ["fit", "--store", self.__path("store"), "--seed", "7", "--config", self.__configPath, "--out", self.__path(outDir)]
        return main(argL)

    def testGenerateIngestEmit(self):
        self.__generateAndIngest()
        truthD = self.__mU.doImport(self.__path("synth", "truth.json"), fmt="json")
        self.assertEqual(sorted(truthD["months"]), ["1", "2"])
        self.assertEqual(truthD["_meta"]["seed"], 7)
        lineL = self.__mU.doImport(self.__path("synth", "records.csv"), fmt="list")
        self.assertTrue(lineL[0].startswith("# seed=7 config="))
        #
        self.assertEqual(main(["emit", "--store", self.__path("store"), "--out", self.__path("emitted.csv")]), 0)
        lrp = LoanRecordProvider(workPath=self.__workPath)
        genL = lrp.readRecords(self.__path("synth", "records.csv"))
        emitL = lrp.readRecords(self.__path("emitted.csv"))
        self.assertTrue(all(rec.rate is not None for rec in genL))
        self.assertEqual([rec[:5] for rec in emitL], [rec[:5] for rec in genL])
        #
        self.assertEqual(main(["generate", "--benchmark", "core_periphery", "--months", "3", "--seed", "2", "--out", self.__path("cp")]), 0)
        cpL = lrp.readRecords(self.__path("cp", "records.csv"))
        self.assertEqual(sorted({rec.maturity.code for rec in cpL}), sorted(["<1d", "2-7d", "8-30d"]))

    def testStats(self):
        self.__generateAndIngest()
        self.assertEqual(main(["stats", "--store", self.__path("store"), "--seed", "3", "--n_null", "5", "--out", self.__path("stats")]), 0)
        docD = self.__mU.doImport(self.__path("stats", "stats-0001.json"), fmt="json")
        self.assertEqual(len(docD["layers"]), 9)
        self.assertEqual(docD["layers"][-1]["layer"], "+".join(["<1d", "2-7d", "8-30d", "31-90d", "91-180d", "0.5-1y", "1-3y", ">3y"]))
        self.assertIn("density", docD["layers"][-1])
        self.assertTrue(os.path.exists(self.__path("stats", "stats-0002.csv")))
        self.assertTrue(os.path.exists(self.__path("stats", "activity.csv")))
        #
        self.assertEqual(main(["stats", "--store", self.__path("store"), "--seed", "3", "--n_null", "5", "--layer", "<1d+2-7d", "--out", self.__path("stats-sel")]), 0)
        docD = self.__mU.doImport(self.__path("stats-sel", "stats-0001.json"), fmt="json")
        self.assertEqual([rD["layer"] for rD in docD["layers"]], ["<1d+2-7d"])
        self.assertEqual(main(["stats", "--store", self.__path("store"), "--seed", "3", "--layer", "9y", "--out", self.__path("stats-bad")]), 1)

    def testFitAndReport(self):
        self.__generateAndIngest()
        self.assertEqual(self.__fit("fits"), 0)
        fitD = self.__mU.doImport(self.__path("fits", "fit-0001.json"), fmt="json")
        self.assertEqual(fitD["month"], 1)
        self.assertLessEqual(fitD["log10_vs_differentiation"], 0.0)
        self.assertEqual(fitD["fit"]["binning_kind"], "contiguous")
        self.assertTrue(os.path.exists(self.__path("fits", "fit_summary.csv")))
        #
        argL = ["report", "--store", self.__path("store"), "--fits", self.__path("fits"), "--q", "0.95,1.0", "--top", "0.1,0.5"]
        self.assertEqual(main(argL + ["--csv", self.__path("synth", "records.csv"), "--out", self.__path("report")]), 0)
        for fileName in ("series.json", "og_timeline.csv", "b_counts.csv", "nmi.csv", "ogb_sizes.csv", "group_strengths.csv", "instrength.csv", "yield.csv", "term_summary.csv"):
            self.assertTrue(os.path.exists(self.__path("report", fileName)), fileName)
        seriesD = self.__mU.doImport(self.__path("report", "series.json"), fmt="json")
        self.assertEqual(seriesD["months"], [1, 2])
        self.assertEqual(seriesD["_meta"]["seed"], 7)
        nmiL = self.__mU.doImport(self.__path("report", "nmi.csv"), fmt="list")
        self.assertEqual(nmiL[1], "month,label,q=0.95,q=1.0")
        #
        self.assertEqual(main(["report", "--store", self.__path("store"), "--fits", self.__path("store"), "--out", self.__path("report-none")]), 1)

    def testDeterminism(self):
        self.__generateAndIngest()
        self.assertEqual(self.__fit("fits-a"), 0)
        self.assertEqual(self.__fit("fits-b"), 0)
        for fileName in ("fit-0001.json", "fit-0002.json", "fit_summary.csv"):
            self.assertEqual(self.__mU.doImport(self.__path("fits-a", fileName), fmt="list"), self.__mU.doImport(self.__path("fits-b", fileName), fmt="list"))

    def testErrors(self):
        emptyPath = self.__path("empty.csv")
        with open(emptyPath, "w", encoding="utf-8"):
            pass
        self.assertEqual(main(["ingest", "--csv", emptyPath, "--out", self.__path("store")]), 1)
        self.assertEqual(main(["ingest", "--csv", self.__path("missing.csv"), "--out", self.__path("store")]), 1)
        with self.assertRaises(SystemExit):
            buildParser().parse_args(["fit", "--store", "x", "--out", "y"])
        with self.assertRaises(SystemExit):
            buildParser().parse_args(["generate", "--benchmark", "fractal", "--seed", "1", "--out", "y"])
        args = buildParser().parse_args(["fit", "--store", "x", "--out", "y", "--seed", "4", "--binning", "noncontiguous"])
        self.assertEqual((args.command, args.seed, args.binning, args.jobs), ("fit", 4, "noncontiguous", None))


def layeredSbmExecSuite():
    suiteSelect = unittest.TestSuite()
    suiteSelect.addTest(LayeredSbmExecTests("testGenerateIngestEmit"))
    suiteSelect.addTest(LayeredSbmExecTests("testStats"))
    suiteSelect.addTest(LayeredSbmExecTests("testFitAndReport"))
    suiteSelect.addTest(LayeredSbmExecTests("testDeterminism"))
    suiteSelect.addTest(LayeredSbmExecTests("testErrors"))
    return suiteSelect


if __name__ == "__main__":
    mySuite = layeredSbmExecSuite()
    unittest.TextTestRunner(verbosity=2).run(mySuite)
