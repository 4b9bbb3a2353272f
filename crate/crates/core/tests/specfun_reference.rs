//! Ultraspherical values checked against an independent 40-digit table.

#![allow(clippy::excessive_precision)]

use bilap_core::specfun::{eval_ultra, eval_ultra_deriv, BesselOrder, Kind};

// (n, ℓ, z, j, y, e^{−z}i, e^{z}k, j′)
type Row = (u32, u32, f64, f64, f64, f64, f64, f64);

#[rustfmt::skip]
const TABLE: &[Row] = &[
    (2, 0, 0.003, 9.9999775000126562e-1, -3.7720096638205665, 9.9700673876474969e-1, 5.9428920472499819, -1.4999983125006328e-3),
    (2, 0, 0.7, 8.8120088860740528e-1, -1.9066492933739507e-1, 5.5930552650706832e-1, 1.3301236562420556, -3.2899574154005895e-1),
    (2, 0, 4.5, -3.2054250898512142e-1, -1.9470500862950453e-1, 1.9419827762838228e-1, 5.760967897687883e-1, 2.3106043192337063e-1),
    (2, 0, 19.25, 1.6807126282728141e-1, -6.9369315961057444e-2, 9.1536092008122747e-2, 2.8385336942276391e-1, 6.50300512185853e-2),
    (2, 0, 55.0, -7.4548302648236823e-2, -7.7569178730412649e-2, 5.3916898493938759e-2, 1.6861661579540994e-1, 7.8250038308684659e-2),
    (2, 1, 0.003, 1.4999983125006328e-3, -2.1221272627568979e+2, 1.4955084257007765e-3, 3.343251682543078e+2, 4.9999831250105469e-1),
    (2, 1, 0.7, 3.2899574154005895e-1, -1.1032498719076334, 1.8466998276274732e-1, 2.1150113128480524, 4.1120697212160678e-1),
    (2, 1, 4.5, -2.3106043192337063e-1, 3.0099732306965462e-1, 1.7095882229749211e-1, 6.3714979877813552e-1, -2.6919574633548351e-1),
    (2, 1, 19.25, -6.50300512185853e-2, -1.6992831704675242e-1, 8.9125903220372349e-2, 2.9113504227094681e-1, 1.7144944730616896e-1),
    (2, 1, 55.0, -7.8250038308684659e-2, 7.3846265432577888e-2, 5.3424475195194519e-2, 1.7014264970730715e-1, -7.3125574678988011e-2),
    (2, 3, 0.003, 5.6249968359382119e-10, -1.8862829290833511e+8, 5.6081534417917193e-10, 2.9718618551839374e+8, 5.6249947265641611e-7),
    (2, 3, 0.7, 6.9296548267508408e-3, -1.5819479052819634e+1, 3.6585294610887673e-3, 4.4246514864403511e+1, 2.9088423678116681e-2),
    (2, 3, 4.5, 4.247039729774556e-1, -9.0136815936882735e-3, 6.5877418893494868e-2, 1.4009493348800256, -6.5286998299124813e-2),
    (2, 3, 19.25, 2.8702231626885247e-2, 1.8067417177470628e-1, 7.2029537940932382e-2, 3.5640281702883622e-1, -1.7930070684379187e-1),
    (2, 3, 55.0, 8.3464790796665692e-2, -6.800957470723858e-2, 4.9644534082101967e-2, 1.8285564034289348e-1, 6.7150221757193798e-2),
    (2, 7, 0.003, 3.3900660108294998e-24, -1.3413557435523681e+22, 3.3799129540506995e-24, 2.1133255709008539e+22, 7.9101533896314359e-21),
    (2, 7, 0.7, 1.2571583113555613e-7, -3.6357280166212533e+5, 6.4370091314804843e-8, 1.1040365807701524e+6, 1.2516488572289999e-6),
    (2, 7, 4.5, 3.0022037722002314e-2, -2.0294254507601535, 1.1869221734358214e-3, 5.0554859819854789e+1, 3.7575313567709339e-2),
    (2, 7, 19.25, -1.4679407859742309e-1, 1.1800629650597879e-1, 2.5147364796847611e-2, 9.7079254543707619e-1, -1.0562981143862565e-1),
    (2, 7, 55.0, 1.0255535905806778e-1, -3.393620606156299e-2, 3.4414921762927163e-2, 2.6205188368720736e-1, 3.2714206417906546e-2),
    (3, 0, 0.003, 7.9788336397656272e-1, -2.659603234416782e+2, 7.9549568725546907e-1, 4.1777137910516675e+2, -7.9788384270699145e-4),
    (3, 0, 0.7, 7.3430192349011829e-1, -8.7179396097855277e-1, 4.2937760752356903e-1, 1.7904487675935718, -1.7720878686447336e-1),
    (3, 0, 4.5, -1.7332359746773095e-1, 3.7375714188425902e-2, 8.8642899336170321e-2, 2.7851425273677783e-1, 1.1406408044031967e-3),
    (3, 0, 19.25, 1.6157776924100344e-2, -3.8169469828732194e-2, 2.0724274306567931e-2, 6.510722791249352e-2, 3.7330104793713994e-2),
    (3, 0, 55.0, -1.4503440316466089e-2, -3.2099267640113822e-4, 7.253496007298776e-3, 2.2787529769372732e-2, 5.846915912459762e-4),
    (3, 1, 0.003, 7.9788384270699145e-4, -8.8654239030590044e+4, 7.9549520995846583e-4, 1.3967489774749408e+5, 2.6596080217190176e-1),
    (3, 1, 0.7, 1.7720878686447336e-1, -1.9797218677451937, 9.7060897161139998e-2, 4.3482327212986743, 2.2799110387733725e-1),
    (3, 1, 4.5, -1.1406408044031967e-3, 1.8162931173182559e-1, 6.8966358767539687e-2, 3.4040630890050624e-1, -1.728166459991073e-1),
    (3, 1, 19.25, -3.7330104793713994e-2, -1.8140606525592926e-2, 1.9647688628304663e-2, 6.8489421570285391e-2, 2.00362293702005e-2),
    (3, 1, 55.0, -5.846915912459762e-4, 1.4497604085986068e-2, 7.1216142617115255e-3, 2.3201848492452236e-2, -1.4482178804057145e-2),
    (3, 3, 0.003, 2.0517021304988569e-10, -1.4775653312953864e+11, 2.0455582930984786e-10, 2.3279233220635306e+11, 2.0517014465980845e-7),
    (3, 3, 0.7, 2.536255485907106e-3, -5.239690905624046e+1, 1.3299401909529645e-3, 1.5024631742753871e+2, 1.0671417438155517e-2),
    (3, 3, 4.5, 1.9287749665417595e-1, -8.8617652139835415e-2, 2.1560440073676135e-2, 9.0201941112693068e-1, 1.1165065721946335e-3),
    (3, 3, 19.25, 3.1622194250012546e-2, 2.7320440893969596e-2, 1.5060079054797917e-2, 8.8172773258952706e-2, -2.8546301151694742e-2),
    (3, 3, 55.0, 1.9002868683234919e-3, -1.4396533987705042e-2, 6.4975193235027683e-3, 2.5388492596242082e-2, 1.4333345366520055e-2),
    (3, 7, 0.003, 8.608542433226833e-25, -1.6433800860714508e+25, 8.5827600494716385e-25, 2.5891694844289306e+25, 2.0086597491708021e-21),
    (3, 7, 0.7, 3.1952403393910701e-8, -1.9059981287240098e+6, 1.6331095192356848e-8, 5.8060231937734551e+6, 3.1820634530977212e-7),
    (3, 7, 4.5, 7.9454389919394621e-3, -1.5088363395588119, 2.913093473226182e-4, 4.3558667243157772e+1, 1.0107249071228634e-2),
    (3, 7, 19.25, -1.2797821352506936e-2, 4.1230742593148326e-2, 4.7464234734062934e-3, 2.6490584853829313e-1, -3.7282608158906897e-2),
    (3, 7, 55.0, 7.3922581455104256e-3, -1.2561121536992877e-2, 4.3427320072513206e-3, 3.771347410430272e-2, 1.230869937814643e-2),
    (4, 0, 0.003, 4.9999943750021094e-1, -7.0737575425229929e+4, 4.9850280856692551e-1, 1.1144172275143593e+5, -3.749997187500791e-4),
    (4, 0, 0.7, 4.699939164857985e-1, -1.5760712455823334, 2.6381426108963904e-1, 3.0214447326400748, -8.3981349091702447e-2),
    (4, 0, 4.5, -5.1346762649637919e-2, 6.6888294015478805e-2, 3.7990849399442692e-2, 1.4158884417291901e-1, -4.8410885263521242e-2),
    (4, 0, 19.25, -3.378184478887548e-3, -8.8274450413897359e-3, 4.6299170504089532e-3, 1.5123898299789445e-2, 9.0819548979250133e-3),
    (4, 0, 55.0, -1.422727969248812e-3, 1.3426593715014161e-3, 9.7135409445808217e-4, 3.0935027219510391e-3, -1.3036881219952582e-3),
    (4, 1, 0.003, 3.749997187500791e-4, -4.7157126280265346e+7, 3.7387696622135809e-4, 7.4296462798306372e+7, 1.2499971875013184e-1),
    (4, 1, 0.7, 8.3981349091702447e-2, -4.2306822311818167, 4.5252863325414639e-2, 1.0532875887888865e+1, 1.1007384894993087e-1),
    (4, 1, 4.5, 4.8410885263521242e-2, 7.2995910368991587e-2, 2.6270350850999311e-2, 1.9094988402547251e-1, -8.362068615865208e-2),
    (4, 1, 19.25, -9.0819548979250133e-3, 2.6864636819884661e-3, 4.2740913198599917e-3, 1.6316943689472353e-2, -1.9628148844057278e-3),
    (4, 1, 55.0, 1.3036881219952582e-3, 1.4591726813348269e-3, 9.4498527827313808e-4, 3.1782476588965822e-3, -1.4938382304485533e-3),
    (4, 3, 0.003, 7.0312468359380933e-11, -1.2575214811509712e+14, 7.0101910135932193e-11, 1.9812419797539196e+14, 7.0312447265638843e-8),
    (4, 3, 0.7, 8.7156715422621579e-4, -1.8947722453803819e+2, 4.5454339371544734e-4, 5.5232693545201349e+2, 3.6740272223139455e-3),
    (4, 3, 4.5, 7.7427328952021159e-2, -7.566663084119552e-2, 6.7511156232971281e-3, 6.060459832491838e-1, 8.3482951594110684e-3),
    (4, 3, 19.25, 9.5466899689624537e-3, 2.389403474215192e-4, 3.1078178096003343e-3, 2.208767575807891e-2, -9.8863471261958555e-4),
    (4, 3, 55.0, -1.1381381237208799e-3, -1.5940677055475316e-3, 8.4651678092020856e-4, 3.5409365323039743e-3, 1.6210087530049108e-3),
    (4, 7, 0.003, 2.1187913229806678e-25, -2.0865532670795856e+28, 2.112445530267766e-25, 3.2873955086228905e+28, 4.943846067156329e-22),
    (4, 7, 0.7, 7.870648752230585e-9, -1.0357371599871966e+7, 4.016306685535173e-9, 3.1635533450949612e+7, 7.8399989093544093e-8),
    (4, 7, 4.5, 2.0279186666332924e-3, -1.1842475029045728, 6.954280851787225e-5, 3.8643636575185085e+1, 2.6157266049561515e-3),
    (4, 7, 19.25, 2.7142933243692552e-3, 9.5213546258146226e-3, 8.848916856747789e-4, 7.3150958920983256e-2, -8.8946866761946176e-3),
    (4, 7, 55.0, -3.574855668027721e-4, -1.9337957106683465e-3, 5.4551416834884219e-4, 5.4518646968111332e-3, 1.9231405301689587e-3),
    (5, 0, 0.003, 2.6596128090233048e-1, -2.9551413010196681e+7, 2.6516506998615528e-1, 4.6558299249164695e+7, -1.595768095754409e-4),
    (5, 0, 0.7, 2.5315540980639052e-1, -2.8281740967788481, 1.3865842451591428e-1, 6.2117610304266776, -3.5949008470076094e-2),
    (5, 0, 4.5, -2.534757343118215e-4, 4.036206927373902e-2, 1.5325857503897708e-2, 7.564584642233472e-2, -3.8347371169954551e-2),
    (5, 0, 19.25, -1.9392262230500776e-3, -9.4236917016067147e-4, 1.0206591495223201e-3, 3.5578920296252151e-3, 1.1415821087402897e-3),
    (5, 0, 55.0, -1.0630756204472295e-5, 2.6359280156338306e-4, 1.2948389566748228e-4, 4.2185179077185884e-4, -2.6311905541550313e-4),
    (5, 1, 0.003, 1.595768095754409e-4, -2.9551324356755534e+10, 1.590990010805273e-4, 4.6558438506291063e+10, 5.3192201468409283e-2),
    (5, 1, 0.7, 3.5949008470076094e-2, -1.0875326184797131e+1, 1.9146191394037407e-2, 2.9179616941248007e+1, 4.7732504263098554e-2),
    (5, 1, 4.5, 3.8347371169954551e-2, 1.8602331918398035e-2, 9.4811837387727103e-3, 1.1232262044528489e-1, -3.4340027885382534e-2),
    (5, 1, 19.25, -1.1415821087402897e-3, 1.835966873675334e-3, 9.1752191470134912e-4, 3.9366703377334631e-3, -1.7020143562988486e-3),
    (5, 1, 55.0, 2.6311905541550313e-4, 2.0214019656205226e-5, 1.2481898764175144e-4, 4.3732882075796924e-4, -2.9766687507417977e-5),
    (5, 3, 0.003, 2.2796692411302901e-11, -1.1492171843831681e+17, 2.2728423412651804e-11, 1.81060749385602e+17, 2.2796686194022761e-8),
    (5, 3, 0.7, 2.8321275716827768e-4, -7.3765194604720944e+2, 1.4704580899505635e-4, 2.175555580191801e+3, 1.1956842041391999e-3),
    (5, 3, 4.5, 2.8326331377168001e-2, -4.923559438648929e-2, 2.0281921083661449e-3, 4.2413179960027327e-1, 5.0932240869262113e-3),
    (5, 3, 19.25, 1.7389317049624866e-3, -1.3198782617467466e-3, 6.3303399867210866e-4, 5.6022717216097834e-3, 1.1007067023500066e-3),
    (5, 3, 55.0, -2.5872169737310166e-4, -5.3528313181473092e-5, 1.097834057361252e-4, 4.9607905155919059e-4, 6.2774855501129124e-5),
    (5, 7, 0.003, 5.0638486312313838e-26, -2.7389666837052239e+31, 5.0486822413667869e-26, 4.3152826732150885e+31, 1.1815646006651497e-22),
    (5, 7, 0.7, 1.8824123276212685e-9, -5.8199759599295215e+7, 9.5919930930214572e-10, 1.781805033485037e+8, 1.8754685882425738e-8),
    (5, 7, 4.5, 5.0051615422456212e-4, -9.7432277575231288e-1, 1.6169279130173832e-5, 3.5253330334424464e+1, 6.5339498882085354e-4),
    (5, 7, 19.25, 1.6950054514188814e-3, 1.5127179579026199e-3, 1.6297333188760474e-4, 2.0439480382395063e-2, -1.5453442008673117e-3),
    (5, 7, 55.0, -2.0668848224115064e-4, -1.6641406323591368e-4, 6.8214765901604911e-5, 7.9164511973359177e-4, 1.7198441759858058e-4),
];

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1e-300)
}

#[test]
fn values_match_reference_table() {
    for &(n, ell, z, j, y, i, k, jd) in TABLE {
        let o = BesselOrder::new(n, ell).unwrap();
        let get = |kind| eval_ultra(kind, o, z, true).unwrap().to_f64();
        assert!(close(get(Kind::J), j, 1e-12), "j n={n} l={ell} z={z}");
        assert!(close(get(Kind::Y), y, 1e-12), "y n={n} l={ell} z={z}");
        let iv = eval_ultra(Kind::I, o, z, true).unwrap();
        assert_eq!(iv.scale_exponent, z);
        assert!(close(iv.value, i, 1e-12), "i n={n} l={ell} z={z}");
        let kv = eval_ultra(Kind::K, o, z, true).unwrap();
        assert!(
            close(kv.value * (kv.scale_exponent + z).exp(), k, 1e-12),
            "k n={n} l={ell} z={z}"
        );
        let d = eval_ultra_deriv(Kind::J, o, z, false).unwrap().to_f64();
        assert!((d - jd).abs() <= 1e-12 * (jd.abs() + j.abs()), "j' n={n} l={ell} z={z}");
    }
}
