#include "rapgen/vowel.hpp"

namespace rapgen::detail {

// Common Chinese characters and their pinyin finals, grouped by final.
// Finals are stored in phonological form (uei/iou/uen rather than the
// orthographic ui/iu/un) with 'v' standing for the umlauted u.
const std::vector<std::pair<const char*, const char*>>& builtin_finals() {
    static const std::vector<std::pair<const char*, const char*>> table = {
        // -a
        {"大", "a"}, {"他", "a"}, {"她", "a"}, {"它", "a"}, {"那", "a"},
        {"拿", "a"}, {"沙", "a"}, {"炸", "a"}, {"爸", "a"}, {"八", "a"},
        {"把", "a"}, {"答", "a"}, {"辣", "a"}, {"马", "a"},
        // -ai
        {"代", "ai"}, {"再", "ai"}, {"在", "ai"}, {"爱", "ai"}, {"寨", "ai"},
        {"菜", "ai"}, {"来", "ai"}, {"海", "ai"}, {"孩", "ai"}, {"开", "ai"},
        {"埃", "ai"}, {"奶", "ai"}, {"彩", "ai"}, {"抬", "ai"}, {"拜", "ai"},
        {"麦", "ai"}, {"籁", "ai"}, {"白", "ai"}, {"拍", "ai"}, {"败", "ai"},
        {"财", "ai"}, {"踩", "ai"}, {"还", "ai"}, {"百", "ai"},
        // -ei
        {"给", "ei"}, {"美", "ei"}, {"没", "ei"}, {"背", "ei"}, {"北", "ei"},
        {"被", "ei"}, {"悲", "ei"}, {"泪", "ei"}, {"雷", "ei"}, {"黑", "ei"},
        {"飞", "ei"},
        // -ao
        {"包", "ao"}, {"保", "ao"}, {"到", "ao"}, {"道", "ao"}, {"好", "ao"},
        {"毛", "ao"}, {"高", "ao"}, {"老", "ao"}, {"少", "ao"}, {"报", "ao"},
        {"抱", "ao"}, {"饱", "ao"}, {"考", "ao"}, {"草", "ao"}, {"跑", "ao"},
        {"早", "ao"}, {"猫", "ao"}, {"宝", "ao"}, {"闹", "ao"},
        // -iao
        {"小", "iao"}, {"笑", "iao"}, {"校", "iao"}, {"脚", "iao"}, {"消", "iao"},
        {"遥", "iao"}, {"要", "iao"}, {"鸟", "iao"}, {"桥", "iao"}, {"跳", "iao"},
        {"调", "iao"},
        // -ou
        {"头", "ou"}, {"受", "ou"}, {"偶", "ou"}, {"都", "ou"}, {"口", "ou"},
        {"手", "ou"}, {"走", "ou"}, {"狗", "ou"}, {"臭", "ou"}, {"丑", "ou"},
        {"后", "ou"}, {"奏", "ou"},
        // -iou (iu)
        {"又", "iou"}, {"有", "iou"}, {"油", "iou"}, {"由", "iou"}, {"就", "iou"},
        {"流", "iou"}, {"九", "iou"}, {"六", "iou"}, {"秋", "iou"}, {"旧", "iou"},
        {"牛", "iou"}, {"右", "iou"}, {"友", "iou"},
        // -an
        {"单", "an"}, {"含", "an"}, {"难", "an"}, {"漫", "an"}, {"山", "an"},
        {"感", "an"}, {"看", "an"}, {"南", "an"}, {"但", "an"}, {"慢", "an"},
        {"干", "an"}, {"善", "an"}, {"蓝", "an"}, {"站", "an"}, {"三", "an"},
        // -ian
        {"先", "ian"}, {"天", "ian"}, {"填", "ian"}, {"点", "ian"}, {"烟", "ian"},
        {"眼", "ian"}, {"面", "ian"}, {"简", "ian"}, {"件", "ian"}, {"千", "ian"},
        {"片", "ian"}, {"现", "ian"}, {"见", "ian"}, {"间", "ian"}, {"年", "ian"},
        {"念", "ian"}, {"电", "ian"}, {"甜", "ian"}, {"浅", "ian"}, {"脸", "ian"},
        {"钱", "ian"}, {"边", "ian"}, {"言", "ian"},
        // -uan
        {"传", "uan"}, {"穿", "uan"}, {"换", "uan"}, {"暖", "uan"}, {"万", "uan"},
        {"短", "uan"}, {"船", "uan"}, {"软", "uan"}, {"晚", "uan"}, {"欢", "uan"},
        {"酸", "uan"},
        // -van (üan)
        {"远", "van"}, {"院", "van"},
        // -en
        {"人", "en"}, {"们", "en"}, {"很", "en"}, {"跟", "en"}, {"珍", "en"},
        {"真", "en"}, {"尘", "en"}, {"沉", "en"}, {"恨", "en"}, {"根", "en"},
        {"森", "en"}, {"神", "en"}, {"深", "en"}, {"晨", "en"}, {"什", "en"},
        {"分", "en"}, {"门", "en"},
        // -uen (un)
        {"闻", "uen"}, {"温", "uen"}, {"淳", "uen"}, {"纯", "uen"}, {"问", "uen"},
        {"文", "uen"}, {"村", "uen"}, {"存", "uen"}, {"魂", "uen"}, {"昏", "uen"},
        {"论", "uen"},
        // -in
        {"亲", "in"}, {"心", "in"}, {"尽", "in"}, {"金", "in"}, {"银", "in"},
        {"近", "in"}, {"贫", "in"}, {"因", "in"}, {"音", "in"}, {"新", "in"},
        {"林", "in"},
        // -vn (ün)
        {"运", "vn"}, {"云", "vn"}, {"韵", "vn"}, {"群", "vn"},
        // -ang
        {"上", "ang"}, {"长", "ang"}, {"常", "ang"}, {"方", "ang"}, {"放", "ang"},
        {"躺", "ang"}, {"当", "ang"}, {"苍", "ang"}, {"茫", "ang"}, {"唱", "ang"},
        {"肠", "ang"}, {"敞", "ang"}, {"让", "ang"}, {"藏", "ang"}, {"浪", "ang"},
        {"房", "ang"},
        // -iang
        {"像", "iang"}, {"仰", "iang"}, {"巷", "iang"}, {"想", "iang"}, {"象", "iang"},
        {"相", "iang"}, {"香", "iang"}, {"娘", "iang"}, {"量", "iang"}, {"样", "iang"},
        {"将", "iang"}, {"向", "iang"}, {"响", "iang"}, {"江", "iang"}, {"洋", "iang"},
        {"凉", "iang"}, {"强", "iang"}, {"羊", "iang"},
        // -uang
        {"望", "uang"}, {"忘", "uang"}, {"往", "uang"}, {"床", "uang"}, {"黄", "uang"},
        {"光", "uang"}, {"窗", "uang"}, {"亡", "uang"}, {"装", "uang"},
        // -eng
        {"城", "eng"}, {"声", "eng"}, {"封", "eng"}, {"曾", "eng"}, {"生", "eng"},
        {"风", "eng"}, {"灯", "eng"}, {"梦", "eng"}, {"冷", "eng"}, {"胜", "eng"},
        {"成", "eng"}, {"能", "eng"}, {"更", "eng"},
        // -ing
        {"冰", "ing"}, {"名", "ing"}, {"命", "ing"}, {"定", "ing"}, {"幸", "ing"},
        {"行", "ing"}, {"经", "ing"}, {"竟", "ing"}, {"镜", "ing"}, {"轻", "ing"},
        {"静", "ing"}, {"星", "ing"}, {"影", "ing"}, {"听", "ing"}, {"醒", "ing"},
        {"硬", "ing"}, {"灵", "ing"}, {"情", "ing"}, {"兴", "ing"}, {"明", "ing"},
        {"京", "ing"}, {"青", "ing"}, {"清", "ing"},
        // -ong
        {"中", "ong"}, {"从", "ong"}, {"公", "ong"}, {"冲", "ong"}, {"动", "ong"},
        {"空", "ong"}, {"总", "ong"}, {"懂", "ong"}, {"红", "ong"}, {"重", "ong"},
        {"冬", "ong"}, {"东", "ong"}, {"龙", "ong"}, {"工", "ong"}, {"共", "ong"},
        {"众", "ong"}, {"送", "ong"},
        // -iong
        {"用", "iong"}, {"穷", "iong"}, {"永", "iong"},
        // -o
        {"婆", "o"}, {"漠", "o"}, {"莫", "o"}, {"默", "o"}, {"波", "o"},
        {"佛", "o"},
        // -uo
        {"我", "uo"}, {"做", "uo"}, {"多", "uo"}, {"座", "uo"}, {"活", "uo"},
        {"火", "uo"}, {"落", "uo"}, {"说", "uo"}, {"过", "uo"}, {"错", "uo"},
        {"左", "uo"}, {"坐", "uo"}, {"弱", "uo"}, {"果", "uo"}, {"或", "uo"},
        {"国", "uo"}, {"所", "uo"},
        // -e
        {"个", "e"}, {"么", "e"}, {"乐", "e"}, {"了", "e"}, {"的", "e"},
        {"着", "e"}, {"可", "e"}, {"和", "e"}, {"喝", "e"}, {"这", "e"},
        {"热", "e"}, {"色", "e"}, {"河", "e"}, {"车", "e"}, {"得", "e"},
        {"恶", "e"}, {"歌", "e"}, {"合", "e"},
        // -ie
        {"也", "ie"}, {"些", "ie"}, {"写", "ie"}, {"夜", "ie"}, {"椰", "ie"},
        {"界", "ie"}, {"街", "ie"}, {"叶", "ie"}, {"铁", "ie"}, {"节", "ie"},
        {"别", "ie"}, {"切", "ie"},
        // -ve (üe)
        {"月", "ve"}, {"约", "ve"}, {"雪", "ve"}, {"血", "ve"}, {"确", "ve"},
        // -ia
        {"下", "ia"}, {"家", "ia"}, {"假", "ia"}, {"夏", "ia"}, {"加", "ia"},
        // -ua
        {"画", "ua"}, {"话", "ua"}, {"花", "ua"}, {"化", "ua"},
        // -uai
        {"坏", "uai"}, {"外", "uai"}, {"快", "uai"}, {"怀", "uai"}, {"摔", "uai"},
        {"衰", "uai"},
        // -uei (ui)
        {"会", "uei"}, {"伟", "uei"}, {"味", "uei"}, {"最", "uei"}, {"岁", "uei"},
        {"水", "uei"}, {"未", "uei"}, {"贵", "uei"}, {"腿", "uei"}, {"粹", "uei"},
        {"追", "uei"}, {"为", "uei"}, {"对", "uei"}, {"嘴", "uei"}, {"睡", "uei"},
        {"鬼", "uei"}, {"灰", "uei"}, {"位", "uei"}, {"退", "uei"},
        // -i
        {"一", "i"}, {"以", "i"}, {"你", "i"}, {"几", "i"}, {"力", "i"},
        {"机", "i"}, {"己", "i"}, {"理", "i"}, {"里", "i"}, {"记", "i"},
        {"气", "i"}, {"起", "i"}, {"椅", "i"}, {"底", "i"}, {"弥", "i"},
        {"比", "i"}, {"毕", "i"}, {"洗", "i"}, {"离", "i"}, {"迷", "i"},
        {"衣", "i"}, {"直", "i"}, {"只", "i"}, {"之", "i"}, {"知", "i"},
        {"吃", "i"}, {"时", "i"}, {"是", "i"}, {"事", "i"}, {"市", "i"},
        {"实", "i"}, {"世", "i"}, {"子", "i"}, {"自", "i"}, {"次", "i"},
        {"词", "i"}, {"字", "i"}, {"四", "i"}, {"死", "i"}, {"思", "i"},
        {"此", "i"}, {"地", "i"}, {"已", "i"}, {"意", "i"}, {"义", "i"},
        {"日", "i"}, {"失", "i"}, {"湿", "i"}, {"诗", "i"}, {"十", "i"},
        {"石", "i"}, {"识", "i"}, {"喜", "i"}, {"西", "i"}, {"细", "i"},
        {"息", "i"}, {"鼻", "i"}, {"米", "i"}, {"低", "i"}, {"立", "i"},
        {"利", "i"}, {"壹", "i"}, {"际", "i"}, {"七", "i"},
        // -u
        {"不", "u"}, {"书", "u"}, {"朴", "u"}, {"努", "u"}, {"屋", "u"},
        {"故", "u"}, {"肚", "u"}, {"步", "u"}, {"母", "u"}, {"酥", "u"},
        {"路", "u"}, {"出", "u"}, {"读", "u"}, {"木", "u"}, {"土", "u"},
        {"树", "u"}, {"虎", "u"}, {"苦", "u"}, {"鼓", "u"}, {"古", "u"},
        {"哭", "u"}, {"服", "u"}, {"福", "u"}, {"祝", "u"}, {"负", "u"},
        {"父", "u"}, {"护", "u"}, {"富", "u"}, {"珠", "u"}, {"主", "u"},
        {"住", "u"}, {"数", "u"}, {"度", "u"}, {"渡", "u"}, {"无", "u"},
        {"五", "u"}, {"午", "u"}, {"舞", "u"}, {"湖", "u"}, {"目", "u"},
        {"姑", "u"},
        // -v (ü)
        {"去", "v"}, {"句", "v"}, {"需", "v"}, {"许", "v"}, {"虑", "v"},
        {"旅", "v"}, {"语", "v"}, {"雨", "v"}, {"玉", "v"}, {"鱼", "v"},
        {"曲", "v"}, {"律", "v"}, {"于", "v"}, {"与", "v"}, {"女", "v"},
        {"绿", "v"}, {"局", "v"}, {"区", "v"},
        // -er
        {"儿", "er"}, {"尔", "er"}, {"而", "er"}, {"耳", "er"}, {"二", "er"},
    };
    return table;
}

}  // namespace rapgen::detail
