##
# File:    LayeredSbmExec.py
# Author:  J. Westbrook
# Date:    6-Feb-2026
#
# Updates:
#  11-Feb-2026 jdw add generate and emit subcommands, --csv option for yield tables in report
##
"""
Command line interface for ingestion, descriptive statistics, granularity fits and series reports.

    layersbm_exec ingest   --csv records.csv --out store/
    layersbm_exec emit     --store store/ --out records.csv
    layersbm_exec stats    --store store/ --out stats/ --seed 7
    layersbm_exec fit      --store store/ --out fits/ --seed 7 [--binning noncontiguous] [--jobs 4]
    layersbm_exec report   --store store/ --fits fits/ --out report/ [--q 0.95,1.0] [--top 0.05] [--csv records.csv]
    layersbm_exec generate --benchmark core_periphery --months 1,2 --out synth/ --seed 7

The exit status is nonzero if and only if an error was logged.
"""

__docformat__ = "restructuredtext en"
__author__ = "John Westbrook"
__email__ = "john.westbrook@rcsb.org"
__license__ = "Apache 2.0"

import argparse
import logging
import os
import sys

from rcsb.utils.config.ConfigUtil import ConfigUtil
from rcsb.utils.io.MarshalUtil import MarshalUtil
from rcsb.utils.layersbm import __version__
from rcsb.utils.layersbm.LayeredMultigraph import MaturityClass
from rcsb.utils.layersbm.LayeredSbmInference import FitConfig
from rcsb.utils.layersbm.LayeredSbmInference import FitResult
from rcsb.utils.layersbm.LayeredSbmInference import LayeredSbmInference
from rcsb.utils.layersbm.LoanRecordProvider import LoanRecordProvider
from rcsb.utils.layersbm.MonthlySeriesAnalysis import MonthlyFit
from rcsb.utils.layersbm.MonthlySeriesAnalysis import MonthlySeriesAnalysis
from rcsb.utils.layersbm.NetworkStatsUtil import NetworkStatsUtil
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedNetworkGenerator
from rcsb.utils.layersbm.PlantedNetworkGenerator import PlantedSpec
from rcsb.utils.layersbm.SeriesReportWriter import SeriesReportWriter

logger = logging.getLogger(__name__)


class ErrorCountHandler(logging.Handler):
    """Count records at ERROR level or above."""

    def __init__(self):
        super(ErrorCountHandler, self).__init__(level=logging.ERROR)
        self.count = 0

    def emit(self, record):
        self.count += 1


class LayeredSbmExec(object):
    """Run one subcommand from parsed arguments."""

    def __init__(self, args):
        self.__args = args
        self.__config = self.__buildConfig(args)

    def getConfig(self):
        return self.__config

    def run(self):
        opD = {"ingest": self.ingest, "emit": self.emit, "stats": self.stats, "fit": self.fit, "report": self.report, "generate": self.generate}
        return opD[self.__args.command]()

    # --- subcommands ---
    def ingest(self):
        args = self.__args
        lrp = LoanRecordProvider(workPath=args.out)
        recL = lrp.readRecords(args.csv)
        graphD = lrp.ingest(recL)
        meta = {"seed": None, "config_hash": self.__config.getConfigHash(), "source": os.path.basename(args.csv)}
        ok = lrp.exportStore(graphD, args.out, meta=meta)
        logger.info("Ingested %d records into %d monthly graphs under %s", len(recL), len(graphD), args.out)
        if not ok:
            logger.error("Failing to write the graph store %s", args.out)
        return ok

    def emit(self):
        args = self.__args
        lrp = LoanRecordProvider(workPath=args.store)
        graphD = lrp.importStore(args.store)
        png = PlantedNetworkGenerator()
        recL = []
        for month in sorted(graphD):
            recL.extend(png.emitLoanRecords(graphD[month], month))
        ok = lrp.writeRecords(recL, args.out, headerComment=self.__headerComment(None))
        logger.info("Emitted %d records from %d months to %s", len(recL), len(graphD), args.out)
        return ok

    def stats(self):
        args = self.__args
        graphD = LoanRecordProvider(workPath=args.store).importStore(args.store)
        nsU = NetworkStatsUtil(numProc=self.__config.numProc)
        writer = self.__writer(args.out)
        ok = True
        for month in sorted(graphD):
            graph = graphD[month]
            try:
                reportL = [nsU.layerReport(graph, layer=sel, nNull=args.n_null, seed=self.__config.seed) for sel in self.__layerSelections(graph, args.layer)]
                ok = writer.writeStatsReport(month, reportL) and ok
            except Exception as e:
                logger.exception("Failing statistics for month %r with %s", month, str(e))
                ok = False
        ok = writer.writeCsv("activity.csv", ["year", "layer", "months", "mean_active_banks", "loans", "volume", "loans_per_active_bank"], nsU.activityTable(graphD)) and ok
        return ok

    def fit(self):
        args = self.__args
        graphD = LoanRecordProvider(workPath=args.store).importStore(args.store)
        msa = MonthlySeriesAnalysis(self.__config)
        seriesL = msa.runSeries(graphD)
        writer = self.__writer(args.out)
        ok = True
        rowL = []
        for mf in seriesL:
            ok = writer.writeFit(mf.month, mf.fit, mf.log10VsDifferentiation, mf.log10VsAggregation) and ok
            rowL.append([mf.month, "|".join(mf.fit.bins.getLabels(mf.graph.getLayerLabels())), mf.bCount, mf.fit.dl.total, mf.log10VsDifferentiation, mf.log10VsAggregation])
        ok = writer.writeCsv("fit_summary.csv", ["month", "bins", "num_groups", "bits", "log10_vs_differentiation", "log10_vs_aggregation"], rowL) and ok
        for month in msa.getFailedMonths():
            logger.error("Fit failed for month %d", month)
        return ok and not msa.getFailedMonths()

    def report(self):
        args = self.__args
        graphD = LoanRecordProvider(workPath=args.store).importStore(args.store)
        mU = MarshalUtil(workPath=args.fits)
        seriesL = []
        missingL = []
        seed = None
        configHash = self.__config.getConfigHash()
        for month in sorted(graphD):
            fitPath = os.path.join(args.fits, "fit-%04d.json" % month)
            if not mU.exists(fitPath):
                missingL.append(month)
                continue
            docD = mU.doImport(fitPath, fmt="json")
            fit = FitResult.fromDict(docD["fit"])
            graph = graphD[month]
            if fit.graphHash != LayeredSbmInference.graphHash(graph):
                logger.error("Fit for month %d was made on a different graph", month)
                continue
            seed = docD.get("_meta", {}).get("seed", seed)
            configHash = docD.get("_meta", {}).get("config_hash", configHash)
            seriesL.append(MonthlyFit(month, fit, graph.getNodeCount(), fit.partition.getGroupCount(), docD["log10_vs_differentiation"], docD["log10_vs_aggregation"], graph))
        if missingL:
            logger.error("Missing fits for months %r", missingL)
        if not seriesL:
            logger.error("No fits found under %s", args.fits)
            return False
        msa = MonthlySeriesAnalysis(self.__config)
        writer = SeriesReportWriter(args.out, seed, configHash)
        ok = writer.writeSeriesReport(msa, seriesL, self.__floatList(args.q), self.__floatList(args.top))
        if args.csv:
            recL = LoanRecordProvider(workPath=args.out).readRecords(args.csv)
            ok = writer.writeYieldReport(msa, recL) and ok
        logger.info("Report over %d months written to %s (%d files)", len(seriesL), args.out, len(writer.getWrittenFiles()))
        return ok and not missingL

    def generate(self):
        args = self.__args
        png = PlantedNetworkGenerator()
        if args.spec:
            spec = PlantedSpec.fromDict(MarshalUtil().doImport(args.spec, fmt="json"))
        else:
            spec = png.getSpecBuilder(args.benchmark)()
        codeL = MaturityClass.codes()
        if any(label not in codeL for label in spec.layerLabels):
            if spec.getLayerCount() > len(codeL):
                raise ValueError("cannot emit %d layers as maturity classes" % spec.getLayerCount())
            logger.info("Emitting layers %r as maturity classes %r", spec.layerLabels, codeL[: spec.getLayerCount()])
            spec.layerLabels = codeL[: spec.getLayerCount()]
        monthL = [int(tok) for tok in args.months.split(",") if tok.strip()]
        writer = self.__writer(args.out)
        recL = []
        truthD = {}
        for month in monthL:
            graph, partition, bins = png.sample(spec, [self.__config.seed, month])
            recL.extend(png.emitLoanRecords(graph, month, rateSeed=self.__config.seed if args.rates else None))
            truthD[str(month)] = {"groups": dict(zip(graph.getNodes(), partition.getAssignment())), "bins": bins.getBins(), "binning_kind": bins.getKind()}
        lrp = LoanRecordProvider(workPath=args.out)
        ok = lrp.writeRecords(recL, writer.getPath("records.csv"), headerComment=self.__headerComment(self.__config.seed))
        ok = writer.writeJson("truth.json", {"spec": spec.toDict(), "months": truthD}) and ok
        logger.info("Generated %d records over %d months under %s", len(recL), len(monthL), args.out)
        return ok

    # --- helpers ---
    def __buildConfig(self, args):
        overrideD = {"seed": getattr(args, "seed", None), "numProc": getattr(args, "jobs", None), "binningKind": getattr(args, "binning", None)}
        if getattr(args, "config", None):
            cfgOb = ConfigUtil(configPath=args.config, defaultSectionName=args.config_section, mockTopPath=None)
            return FitConfig.fromConfig(cfgOb, args.config_section, **overrideD)
        return FitConfig(**{ky: val for ky, val in overrideD.items() if val is not None})

    def __writer(self, outPath):
        return SeriesReportWriter(outPath, getattr(self.__args, "seed", None), self.__config.getConfigHash())

    def __headerComment(self, seed):
        return "seed=%s config=%s" % ("none" if seed is None else str(seed), self.__config.getConfigHash())

    def __floatList(self, text):
        return [float(tok) for tok in text.split(",") if tok.strip()]

    def __layerSelections(self, graph, selector):
        """Each layer and the collapsed network for "each", else one selection of "+"-joined layer labels."""
        labelL = graph.getLayerLabels()
        if selector == "each":
            return list(range(len(labelL))) + [None]
        selL = []
        for label in selector.split("+"):
            if label not in labelL:
                raise ValueError("unknown layer %r (layers are %r)" % (label, labelL))
            selL.append(labelL.index(label))
        return [selL[0]] if len(selL) == 1 else [sorted(selL)]


def buildParser():
    parser = argparse.ArgumentParser(prog="layersbm_exec", description="Layered SBM granularity analysis of interbank lending networks")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    subParsers = parser.add_subparsers(dest="command")
    subParsers.required = True
    #
    commonP = argparse.ArgumentParser(add_help=False)
    commonP.add_argument("--out", required=True, help="Output directory (output file for emit)")
    commonP.add_argument("--config", default=None, help="Configuration file (YAML or INI)")
    commonP.add_argument("--config_section", default=FitConfig.SECTION_NAME, help="Configuration section name")
    commonP.add_argument("--jobs", type=int, default=None, help="Worker processes for months, restarts and null replicas")
    commonP.add_argument("--debug", default=False, action="store_true", help="Turn on verbose logging")
    #
    ingestP = subParsers.add_parser("ingest", parents=[commonP], help="Ingest a loan record CSV into a monthly graph store")
    ingestP.add_argument("--csv", required=True, help="Loan record CSV file")
    #
    emitP = subParsers.add_parser("emit", parents=[commonP], help="Emit a monthly graph store as a loan record CSV")
    emitP.add_argument("--store", required=True, help="Monthly graph store directory")
    #
    statsP = subParsers.add_parser("stats", parents=[commonP], help="Descriptive statistics per month and layer")
    statsP.add_argument("--store", required=True, help="Monthly graph store directory")
    statsP.add_argument("--seed", type=int, required=True, help="Seed for the random-graph null models")
    statsP.add_argument("--layer", default="each", help='"each" (every layer plus the collapsed network) or "+"-joined layer labels')
    statsP.add_argument("--n_null", type=int, default=100, help="Random-graph null replicas")
    #
    fitP = subParsers.add_parser("fit", parents=[commonP], help="Optimal granularity fits and rejection report per month")
    fitP.add_argument("--store", required=True, help="Monthly graph store directory")
    fitP.add_argument("--seed", type=int, required=True, help="Base inference seed")
    fitP.add_argument("--binning", default=None, choices=["contiguous", "noncontiguous"], help="Bin set family")
    #
    reportP = subParsers.add_parser("report", parents=[commonP], help="Series tables from fitted months")
    reportP.add_argument("--store", required=True, help="Monthly graph store directory")
    reportP.add_argument("--fits", required=True, help="Directory holding the fit-NNNN.json documents")
    reportP.add_argument("--q", default="0.95,0.99,1.0", help="Comma separated strength fractions for the NMI series")
    reportP.add_argument("--top", default="0.05", help="Comma separated top strength fractions for the instrength tables")
    reportP.add_argument("--csv", default=None, help="Loan record CSV for the yield and term summary tables")
    #
    generateP = subParsers.add_parser("generate", parents=[commonP], help="Synthetic loan records from a planted network")
    sourceG = generateP.add_mutually_exclusive_group(required=True)
    sourceG.add_argument("--benchmark", choices=["core_periphery", "granularity", "two_block", "single_pattern", "multi_pattern"], help="Built-in planted network")
    sourceG.add_argument("--spec", default=None, help="Planted network specification (JSON)")
    generateP.add_argument("--months", default="1", help="Comma separated month numbers")
    generateP.add_argument("--seed", type=int, required=True, help="Sampling seed")
    generateP.add_argument("--rates", default=False, action="store_true", help="Attach synthetic interest rates")
    return parser


def main(argv=None):
    """Console entry point; returns the process exit status."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s]-%(module)s.%(funcName)s: %(message)s")
    args = buildParser().parse_args(argv)
    rootLogger = logging.getLogger()
    errHandler = ErrorCountHandler()
    rootLogger.addHandler(errHandler)
    if args.debug:
        logging.getLogger("rcsb.utils.layersbm").setLevel(logging.DEBUG)
    try:
        ok = LayeredSbmExec(args).run()
        if not ok:
            logger.error("Command %s completed with errors", args.command)
    except Exception as e:
        logger.exception("Failing %s with %s", args.command, str(e))
    finally:
        rootLogger.removeHandler(errHandler)
    return 1 if errHandler.count else 0


if __name__ == "__main__":
    sys.exit(main())
