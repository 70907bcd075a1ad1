from horace import CorollaryPipeline, HoraceCertifier
from interpolation import InterpolationSystem
from perfect_case_enumerator import PerfectCaseEnumerator
from segre_format import SegreFormat
from tangency import TangencyAnalyzer
from waring import WaringDecomposer


print("Test A1: Two-factor perfect cases up to degree 5")
cases = PerfectCaseEnumerator.enumerate_corollary_two(5)
print(PerfectCaseEnumerator.table_rows(cases))
assert(len(cases) == 2)

print("Test A2: Conics through two double points are defective")
verdict = InterpolationSystem.secant_dim(SegreFormat.parse("r=2;d=2"), 1)
print(verdict["note"])
assert(verdict["status"] == "deficient")

print("Test A3: Bidegree (4,5) secant variety fills the space")
verdict = InterpolationSystem.secant_dim(SegreFormat.parse("r=1,1;d=4,5"), 9)
print(verdict["rank"], verdict["ncoeff"])
assert(verdict["rank"] == 30)

print("Test B1: Double line")
report = TangencyAnalyzer.check_weak_defectivity(SegreFormat.parse("r=2;d=2"), 2)
print(len(report["extra_singularities"]), report["certification"])
assert(report["weakly_defective"])

print("Test B2: Bidegree (4,5) with 9 double points")
report = TangencyAnalyzer.check_weak_defectivity(SegreFormat.parse("r=1,1;d=4,5"), 9)
print(report["hessian_ratios"])
assert(not report["weakly_defective"])

print("Test C1: One Horace step on (3,3,3)")
step = HoraceCertifier.horace_step(SegreFormat.parse("r=1,1,1;d=3,3,3"), 8, 5)
print(step["hypotheses_ok"], step["bound_c"])
assert(step["all_hold"])

print("Test C2: Certificate of (3,3,14) with 60 points")
certificate = HoraceCertifier.certify_weakly(SegreFormat.parse("r=1,1,1;d=3,3,14"), 60)
print([(node["t"], node["degree"], node["ok"]) for node in certificate["nodes"]])
assert(certificate["status"] == "certified")

print("Test D1: Plane quintic has one decomposition")
nu = WaringDecomposer.nu_experiment(SegreFormat.parse("r=2;d=5"), 6, nstarts=20)
print(nu["statement"], nu["cluster_sizes"], nu["convergence_rate"])
assert(nu["nu_est"] == 1)

print("Test D2: Pipeline of bidegree (4,5)")
case = CorollaryPipeline.find_case(cases, SegreFormat.parse("r=1,1;d=4,5"))
pipeline = CorollaryPipeline.corollary_pipeline(case)
print(pipeline["statement"])
assert(pipeline["hypotheses_ok"])
